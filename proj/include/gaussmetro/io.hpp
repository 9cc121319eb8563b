// Copyright 2026 The gaussmetro Authors
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

#ifndef GAUSSMETRO_IO_HPP
#define GAUSSMETRO_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gaussmetro/montecarlo.hpp"
#include "gaussmetro/optimal.hpp"

namespace gaussmetro {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a(std::string_view data);
std::string hex64(std::uint64_t v);

Json matrix_to_json(const Mat& m);  // row-major nested arrays
Mat matrix_from_json(const Json& j);
Json vector_to_json(const Vec& v);
Vec vector_from_json(const Json& j);

Json to_json(const GaussianState& s);
GaussianState state_from_json(const Json& j);
Json to_json(const PassiveTransform& t);
PassiveTransform transform_from_json(const Json& j);
Json to_json(const GeneraldyneMeasurement& m);
GeneraldyneMeasurement measurement_from_json(const Json& j);
Json to_json(const PhaseGenerator& g);
Json to_json(const NoiseModel& n);
Json to_json(const Scheme& s);

/// Hash of the serialized scheme; attached to every report.
std::string fingerprint(const Scheme& s);
std::string fingerprint(const Json& config);

Json to_json(const FisherBreakdown& b);
Json to_json(const DecoherentFisher& d);
Json to_json(const WorkingPointReport& r);
Json to_json(const EmpiricalFisher& e);
Json to_json(const MleResult& m);
Json to_json(const CrbAudit& a);

/// Shortest round-trip decimal representation.
std::string format_number(double v);

struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;
};

/// Comma-separated table with a leading provenance comment.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(const std::vector<double>& values);
    void add_cells(std::vector<std::string> cells);
    std::string render(const Provenance& p) const;
    Json to_json() const;
};

/// Outcome rows with header lambda_q1,lambda_p1,...
CsvTable outcomes_table(const Mat& outcomes);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace gaussmetro

#endif
