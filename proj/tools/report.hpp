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


#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qdcli {

using Value = std::variant<double, long long, std::string, bool>;

// Doubles are rounded to 10 significant digits when stored, then written
// in shortest round-trip form, so CSV and JSON carry identical numbers.
Value number(double x);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add(std::vector<Value> row);
};

class Report {
 public:
  explicit Report(std::string command);

  void meta(const std::string &key, const std::string &value);
  void summary(const std::string &key, Value v);
  Table &table(const std::string &name, std::vector<std::string> columns);

  std::string csv() const;
  std::string json() const;
  std::string render(const std::string &format) const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::pair<std::string, Value>> summary_;
  // deque keeps references from table() valid.
  std::deque<Table> tables_;
};

std::string format_value(const Value &v);

}  // namespace qdcli
