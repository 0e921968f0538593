#pragma once

// JSON formats.
//
// Matrix file:
//   { "format": "fermirep-matrix", "version": 1, "modes": n, "dim": 2^n,
//     "metadata": {...},
//     "entries": [ {"row": r, "col": c, "re": x, "im": y}, ... ] }
// entries sorted by (row, col), no duplicates, 0 <= row, col < dim.
//
// Build manifest (manifest.json next to one matrix file per generator):
//   { "format": "fermirep-manifest", "version": 1, "variant": ..., "modes": n,
//     "particles": m | null, "xi_minus": 0|1, "xi_plus": 0|1, "dim": 2^n,
//     "generators":  [ {"label": ..., "file": ..., "matrix": <small matrix>}, ... ],
//     "generators2": [ {"label": ..., "matrix": <small matrix>}, ... ]   (mixed only) }
// where a small matrix is {"dim": d, "entries": [...]} in the same entry form.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "fermirep/fock.hpp"
#include "fermirep/liealg.hpp"
#include "fermirep/schwinger.hpp"
#include "fermirep/verify.hpp"

namespace fermirep {

using Json = nlohmann::json;

Json matrix_to_json(const FockOperator& op, const Json& metadata = Json::object());
/// Throws IoError on schema violations.
FockOperator matrix_from_json(const Json& doc, Json* metadata = nullptr);

void write_matrix_file(const std::filesystem::path& path, const FockOperator& op,
                       const Json& metadata = Json::object());
FockOperator read_matrix_file(const std::filesystem::path& path, Json* metadata = nullptr);

Json generators_to_json(const GeneratorSet& gens);
GeneratorSet generators_from_json(const Json& doc);

struct BuildArtifacts {
  RepresentationResult rep;
  GeneratorSet gens;
  std::optional<GeneratorSet> gens2;
  bool xi_minus = false;
  bool xi_plus = false;
};

/// Writes manifest.json and gen_NNN.json (1-based) into `dir`, creating it.
void write_build(const std::filesystem::path& dir, const BuildArtifacts& build);
/// Reads back what write_build wrote, loading every generator file.
BuildArtifacts read_build(const std::filesystem::path& dir);

Json report_to_json(const VerificationReport& report);
VerificationReport report_from_json(const Json& doc);
/// One line per check: "PASS|FAIL  name  residual=...  identities=...".
std::string report_to_text(const VerificationReport& report);

}  // namespace fermirep
