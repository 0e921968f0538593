#include "fermirep/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fermirep/errors.hpp"

namespace fermirep {

namespace fs = std::filesystem;

namespace {

Json entries_to_json(const std::vector<MatrixEntry>& entries) {
  Json out = Json::array();
  for (const auto& e : entries) {
    out.push_back({{"row", e.row}, {"col", e.col}, {"re", e.value.real()}, {"im", e.value.imag()}});
  }
  return out;
}

std::vector<MatrixEntry> entries_from_json(const Json& doc, int dim) {
  if (!doc.is_array()) {
    throw IoError("\"entries\" must be an array");
  }
  std::vector<MatrixEntry> out;
  out.reserve(doc.size());
  for (const auto& item : doc) {
    MatrixEntry e{};
    try {
      e.row = item.at("row").get<int>();
      e.col = item.at("col").get<int>();
      e.value = Complex(item.at("re").get<double>(), item.at("im").get<double>());
    } catch (const Json::exception& ex) {
      throw IoError(std::string("malformed matrix entry: ") + ex.what());
    }
    if (e.row < 0 || e.row >= dim || e.col < 0 || e.col >= dim) {
      throw IoError("matrix entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                    ") outside dimension " + std::to_string(dim));
    }
    if (!out.empty()) {
      const auto& prev = out.back();
      if (std::pair(prev.row, prev.col) >= std::pair(e.row, e.col)) {
        throw IoError("matrix entries must be sorted by (row, col) without duplicates");
      }
    }
    out.push_back(e);
  }
  return out;
}

Json dense_to_json(const DenseMatrix& m) {
  std::vector<MatrixEntry> entries;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) != Complex(0.0)) {
        entries.push_back({static_cast<int>(r), static_cast<int>(c), m(r, c)});
      }
    }
  }
  return {{"dim", m.rows()}, {"entries", entries_to_json(entries)}};
}

DenseMatrix dense_from_json(const Json& doc) {
  int dim = 0;
  try {
    dim = doc.at("dim").get<int>();
  } catch (const Json::exception& ex) {
    throw IoError(std::string("malformed generator matrix: ") + ex.what());
  }
  if (dim < 1) {
    throw IoError("generator dimension must be positive");
  }
  DenseMatrix m = DenseMatrix::Zero(dim, dim);
  if (!doc.contains("entries")) {
    throw IoError("generator matrix has no \"entries\"");
  }
  for (const auto& e : entries_from_json(doc["entries"], dim)) {
    m(e.row, e.col) = e.value;
  }
  return m;
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  try {
    return Json::parse(in);
  } catch (const Json::exception& ex) {
    throw IoError("cannot parse " + path.string() + ": " + ex.what());
  }
}

void write_json(const fs::path& path, const Json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << doc.dump(1) << '\n';
  if (!out) {
    throw IoError("write to " + path.string() + " failed");
  }
}

std::string generator_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "gen_%03zu.json", index + 1);
  return buf;
}

}  // namespace

Json matrix_to_json(const FockOperator& op, const Json& metadata) {
  return {{"format", "fermirep-matrix"},
          {"version", 1},
          {"modes", op.modes()},
          {"dim", op.dim()},
          {"metadata", metadata},
          {"entries", entries_to_json(op.entries())}};
}

FockOperator matrix_from_json(const Json& doc, Json* metadata) {
  int modes = 0;
  int dim = 0;
  try {
    if (doc.at("format").get<std::string>() != "fermirep-matrix") {
      throw IoError("not a fermirep matrix file");
    }
    modes = doc.at("modes").get<int>();
    dim = doc.at("dim").get<int>();
  } catch (const Json::exception& ex) {
    throw IoError(std::string("malformed matrix file: ") + ex.what());
  }
  if (modes < 1 || modes > kHardMaxModes || dim != (1 << modes)) {
    throw IoError("matrix file declares modes = " + std::to_string(modes) + ", dim = " +
                  std::to_string(dim));
  }
  if (metadata != nullptr) {
    *metadata = doc.value("metadata", Json::object());
  }
  if (!doc.contains("entries")) {
    throw IoError("matrix file has no \"entries\"");
  }
  const auto entries = entries_from_json(doc["entries"], dim);
  return FockOperator::from_entries(modes, entries);
}

void write_matrix_file(const fs::path& path, const FockOperator& op, const Json& metadata) {
  write_json(path, matrix_to_json(op, metadata));
}

FockOperator read_matrix_file(const fs::path& path, Json* metadata) {
  return matrix_from_json(read_json(path), metadata);
}

Json generators_to_json(const GeneratorSet& gens) {
  Json out = Json::array();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    out.push_back({{"label", gens.label(i)}, {"matrix", dense_to_json(gens[i])}});
  }
  return out;
}

GeneratorSet generators_from_json(const Json& doc) {
  if (!doc.is_array() || doc.empty()) {
    throw IoError("generator list must be a non-empty array");
  }
  std::vector<DenseMatrix> mats;
  std::vector<std::string> labels;
  for (const auto& item : doc) {
    try {
      labels.push_back(item.at("label").get<std::string>());
      mats.push_back(dense_from_json(item.at("matrix")));
    } catch (const Json::exception& ex) {
      throw IoError(std::string("malformed generator entry: ") + ex.what());
    }
  }
  try {
    return GeneratorSet(std::move(mats), std::move(labels));
  } catch (const ArgumentError& ex) {
    throw IoError(std::string("invalid generator set: ") + ex.what());
  }
}

void write_build(const fs::path& dir, const BuildArtifacts& build) {
  const auto& rep = build.rep;
  if (rep.size() != build.gens.size()) {
    throw ArgumentError("representation and generator set differ in size");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }

  Json gens = generators_to_json(build.gens);
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const auto file = generator_file_name(i);
    gens[i]["file"] = file;
    Json metadata = {{"variant", rep.meta.variant},
                     {"modes", rep.meta.modes},
                     {"label", build.gens.label(i)},
                     {"index", i + 1}};
    metadata["particles"] = rep.meta.particles ? Json(*rep.meta.particles) : Json(nullptr);
    write_matrix_file(dir / file, rep[i], metadata);
  }

  Json manifest = {{"format", "fermirep-manifest"},
                   {"version", 1},
                   {"variant", rep.meta.variant},
                   {"modes", rep.meta.modes},
                   {"dim", 1 << rep.meta.modes},
                   {"xi_minus", build.xi_minus ? 1 : 0},
                   {"xi_plus", build.xi_plus ? 1 : 0},
                   {"generators", gens}};
  manifest["particles"] = rep.meta.particles ? Json(*rep.meta.particles) : Json(nullptr);
  if (build.gens2) {
    manifest["generators2"] = generators_to_json(*build.gens2);
  }
  write_json(dir / "manifest.json", manifest);
}

BuildArtifacts read_build(const fs::path& dir) {
  const Json manifest = read_json(dir / "manifest.json");
  try {
    if (manifest.at("format").get<std::string>() != "fermirep-manifest") {
      throw IoError("not a fermirep manifest");
    }
    BuildArtifacts build{
        RepresentationResult{},
        generators_from_json(manifest.at("generators")),
        std::nullopt,
        manifest.value("xi_minus", 0) != 0,
        manifest.value("xi_plus", 0) != 0,
    };
    if (manifest.contains("generators2")) {
      build.gens2 = generators_from_json(manifest.at("generators2"));
    }
    auto& meta = build.rep.meta;
    meta.variant = manifest.at("variant").get<std::string>();
    meta.modes = manifest.at("modes").get<int>();
    if (!manifest.at("particles").is_null()) {
      meta.particles = manifest.at("particles").get<int>();
    }
    for (const auto& item : manifest.at("generators")) {
      meta.labels.push_back(item.at("label").get<std::string>());
      auto op = read_matrix_file(dir / item.at("file").get<std::string>());
      if (op.modes() != meta.modes) {
        throw IoError("generator file " + item.at("file").get<std::string>() + " has " +
                      std::to_string(op.modes()) + " modes, manifest says " +
                      std::to_string(meta.modes));
      }
      build.rep.ops.push_back(std::move(op));
    }
    return build;
  } catch (const Json::exception& ex) {
    throw IoError(std::string("malformed manifest: ") + ex.what());
  }
}

Json report_to_json(const VerificationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json item = {{"name", c.name},
                 {"pass", c.passed},
                 {"max_residual", c.max_residual},
                 {"elapsed_ms", c.elapsed_ms},
                 {"identities", c.identities}};
    if (!c.item_residuals.empty()) {
      item["item_residuals"] = c.item_residuals;
    }
    if (!c.detail.empty()) {
      item["detail"] = c.detail;
    }
    checks.push_back(std::move(item));
  }
  Json params = {{"n", report.params.n},
                 {"variant", report.params.variant},
                 {"tolerance", report.params.tolerance}};
  params["m"] = report.params.m ? Json(*report.params.m) : Json(nullptr);
  return {{"format", "fermirep-report"},
          {"version", 1},
          {"overall", report.overall()},
          {"params", params},
          {"checks", checks}};
}

VerificationReport report_from_json(const Json& doc) {
  try {
    VerificationReport report;
    const auto& params = doc.at("params");
    report.params.n = params.at("n").get<int>();
    if (!params.at("m").is_null()) {
      report.params.m = params.at("m").get<int>();
    }
    report.params.variant = params.at("variant").get<std::string>();
    report.params.tolerance = params.at("tolerance").get<double>();
    for (const auto& item : doc.at("checks")) {
      CheckResult c;
      c.name = item.at("name").get<std::string>();
      c.passed = item.at("pass").get<bool>();
      c.max_residual = item.at("max_residual").get<double>();
      c.elapsed_ms = item.at("elapsed_ms").get<double>();
      c.identities = item.at("identities").get<std::size_t>();
      c.item_residuals = item.value("item_residuals", std::vector<double>{});
      c.detail = item.value("detail", std::string{});
      report.checks.push_back(std::move(c));
    }
    return report;
  } catch (const Json::exception& ex) {
    throw IoError(std::string("malformed report: ") + ex.what());
  }
}

std::string report_to_text(const VerificationReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    char residual[32];
    std::snprintf(residual, sizeof residual, "%.3e", c.max_residual);
    out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  residual=" << residual
        << "  identities=" << c.identities;
    if (!c.detail.empty()) {
      out << "  (" << c.detail << ")";
    }
    out << '\n';
  }
  out << (report.overall() ? "OK" : "FAILED") << ": " << report.checks.size() - report.failures()
      << "/" << report.checks.size() << " checks passed (tol " << report.params.tolerance << ")\n";
  return out.str();
}

}  // namespace fermirep
