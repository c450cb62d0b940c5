/*
 * Copyright (C) 2026 The loomcas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#pragma once

#include "loomcas/params.hpp"
#include "loomcas/sim.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace loomcas {

using Json = nlohmann::json;

inline constexpr int kTraceFormatVersion = 1;

/// Reads a JSON document. Throws ConfigError when the file is missing or malformed.
Json read_json_file(const std::filesystem::path& path);

/// Applies "a.b.c=value" to the document. The value is parsed as JSON when
/// possible and kept as a string otherwise. Throws ConfigError on bad syntax.
void apply_override(Json& doc, const std::string& assignment);

/// Document schema: {"envelope": {...}, "design": {...}, "scenario": {...}}.
/// Every section and key is optional; unknown keys are rejected.
ScenarioConfig scenario_from_json(const Json& doc);
Json to_json(const ScenarioConfig& cfg);

Json to_json(const EnvelopeBounds& b);
Json to_json(const DesignParams& d);
Json to_json(const FeasibilityReport& report);
Json to_json(const CertificateVerdict& v);
Json to_json(const EpisodeResult& r);
Json to_json(const FalsificationReport& r);
Json to_json(const TraceRecord& rec);

/// Full trace as CSV: a version comment line, a fixed header, one row per record.
void write_trace_csv(std::ostream& os, std::span<const TraceRecord> trace);
/// One JSON object per line.
void write_trace_jsonl(std::ostream& os, std::span<const TraceRecord> trace);
/// Plot extract: t, rho, ttc, u_ca, u_tr, engaged. ttc is empty while not approaching.
void write_plot_csv(std::ostream& os, std::span<const TraceRecord> trace);

/// Column names of the trace CSV, in order.
const std::vector<std::string>& trace_csv_columns();

} // namespace loomcas
