// Copyright 2026 The qdfusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <sstream>

namespace qdcli {

Value number(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // drop negative zero
  return r;
}

void Table::add(std::vector<Value> row) {
  for (auto &v : row)
    if (auto *d = std::get_if<double>(&v)) v = number(*d);
  rows.push_back(std::move(row));
}

Report::Report(std::string command) : command_(std::move(command)) {}

void Report::meta(const std::string &key, const std::string &value) {
  meta_.emplace_back(key, value);
}

void Report::summary(const std::string &key, Value v) {
  if (auto *d = std::get_if<double>(&v)) v = number(*d);
  summary_.emplace_back(key, std::move(v));
}

Table &Report::table(const std::string &name,
                     std::vector<std::string> columns) {
  tables_.push_back({name, std::move(columns), {}});
  return tables_.back();
}

std::string format_value(const Value &v) {
  if (const double *d = std::get_if<double>(&v)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, *d);
    return std::string(buf, r.ptr);
  }
  if (const long long *i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const bool *b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::get<std::string>(v);
}

namespace {

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json to_json(const Value &v) {
  if (const double *d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return format_value(v);
    return *d;
  }
  if (const long long *i = std::get_if<long long>(&v)) return *i;
  if (const bool *b = std::get_if<bool>(&v)) return *b;
  return std::get<std::string>(v);
}

}  // namespace

std::string Report::csv() const {
  std::ostringstream out;
  out << "# command: " << command_ << "\n";
  for (const auto &[k, v] : meta_) out << "# " << k << ": " << v << "\n";
  out << "\n# table: summary\nkey,value\n";
  for (const auto &[k, v] : summary_)
    out << csv_field(k) << "," << csv_field(format_value(v)) << "\n";
  for (const Table &t : tables_) {
    out << "\n# table: " << t.name << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      out << (i ? "," : "") << csv_field(t.columns[i]);
    out << "\n";
    for (const auto &row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << csv_field(format_value(row[i]));
      out << "\n";
    }
  }
  return out.str();
}

std::string Report::json() const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto &[k, v] : meta_) meta[k] = v;
  j["metadata"] = meta;
  nlohmann::ordered_json sum = nlohmann::ordered_json::object();
  for (const auto &[k, v] : summary_) sum[k] = to_json(v);
  j["summary"] = sum;
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const Table &t : tables_) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto &row : t.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const auto &v : row) r.push_back(to_json(v));
      rows.push_back(r);
    }
    tables[t.name] = {{"columns", t.columns}, {"rows", rows}};
  }
  j["tables"] = tables;
  return j.dump(2) + "\n";
}

std::string Report::render(const std::string &format) const {
  return format == "json" ? json() : csv();
}

}  // namespace qdcli
