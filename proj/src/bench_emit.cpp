// Copyright 2026 The nomafl Authors
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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "nomafl/bench.hpp"

namespace nomafl::bench {

namespace {

using nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// The value a reader recovers from the 9-digit text.
double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

json number_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return rounded(v);
}

double number_from(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_row(std::ostream& out, const ResultRow& r) {
  out << (r.seed ? std::to_string(*r.seed) : std::string("mean")) << ','
      << csv_field(r.sweep_variable) << ',' << format_number(r.sweep_value) << ','
      << csv_field(r.algorithm) << ',' << csv_field(r.pairing) << ','
      << format_number(r.alpha) << ',' << format_number(r.beta) << ','
      << format_number(r.gamma) << ',' << format_number(r.energy_j) << ','
      << format_number(r.time_s) << ',' << format_number(r.accuracy) << ','
      << format_number(r.cost) << ',' << format_number(r.objective) << ','
      << csv_field(r.status) << ',' << r.iterations << ',' << csv_field(r.resolutions)
      << ',' << (r.wall_time_s ? format_number(*r.wall_time_s) : std::string()) << '\n';
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  write_csv_header(out);
  for (const ResultRow& r : rows) write_csv_row(out, r);
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows) {
  json arr = json::array();
  for (const ResultRow& r : rows) {
    json j;
    j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    j["sweep_variable"] = r.sweep_variable;
    j["sweep_value"] = number_json(r.sweep_value);
    j["algorithm"] = r.algorithm;
    j["pairing"] = r.pairing;
    j["alpha"] = number_json(r.alpha);
    j["beta"] = number_json(r.beta);
    j["gamma"] = number_json(r.gamma);
    j["energy_j"] = number_json(r.energy_j);
    j["time_s"] = number_json(r.time_s);
    j["accuracy"] = number_json(r.accuracy);
    j["cost"] = number_json(r.cost);
    j["objective"] = number_json(r.objective);
    j["status"] = r.status;
    j["iterations"] = r.iterations;
    j["resolutions"] = r.resolutions;
    j["wall_time_s"] = r.wall_time_s ? number_json(*r.wall_time_s) : json(nullptr);
    arr.push_back(std::move(j));
  }
  json doc;
  doc["schema"] = kJsonSchema;
  doc["version"] = kJsonSchemaVersion;
  doc["rows"] = std::move(arr);
  out << doc.dump(2) << '\n';
}

std::vector<ResultRow> read_json(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("result file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", "") != kJsonSchema) {
    throw InvalidArgument("result file has no '" + std::string(kJsonSchema) + "' schema tag");
  }
  if (doc.value("version", 0) != kJsonSchemaVersion) {
    throw InvalidArgument("unsupported result schema version");
  }
  std::vector<ResultRow> rows;
  try {
    for (const json& j : doc.at("rows")) {
      ResultRow r;
      if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
      r.sweep_variable = j.at("sweep_variable").get<std::string>();
      r.sweep_value = number_from(j, "sweep_value");
      r.algorithm = j.at("algorithm").get<std::string>();
      r.pairing = j.at("pairing").get<std::string>();
      r.alpha = number_from(j, "alpha");
      r.beta = number_from(j, "beta");
      r.gamma = number_from(j, "gamma");
      r.energy_j = number_from(j, "energy_j");
      r.time_s = number_from(j, "time_s");
      r.accuracy = number_from(j, "accuracy");
      r.cost = number_from(j, "cost");
      r.objective = number_from(j, "objective");
      r.status = j.at("status").get<std::string>();
      r.iterations = j.at("iterations").get<int>();
      r.resolutions = j.at("resolutions").get<std::string>();
      if (!j.at("wall_time_s").is_null()) r.wall_time_s = j.at("wall_time_s").get<double>();
      rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed result row: ") + e.what());
  }
  return rows;
}

}  // namespace nomafl::bench
