#include "wsptm/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wsptm/errors.hpp"

namespace wsptm {

using nlohmann::json;

namespace {

constexpr int kVersion = 1;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return rows;
}

Matrix matrix_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw CheckpointError("malformed matrix in checkpoint");
  const std::size_t cols = rows[0].size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw CheckpointError("ragged matrix in checkpoint");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c].get<double>();
  }
  return m;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  json doc;
  doc["format"] = "wsptm-checkpoint";
  doc["version"] = kVersion;
  doc["config"] = ckpt.config_kv;
  doc["vocab_hash"] = std::to_string(ckpt.vocab_hash);
  doc["theta"] = matrix_to_json(ckpt.state.theta);
  doc["theta_hat"] = matrix_to_json(ckpt.state.theta_hat);
  doc["phi"] = matrix_to_json(ckpt.state.phi);
  doc["phi_hat"] = matrix_to_json(ckpt.state.phi_hat);
  doc["gamma"] = matrix_to_json(ckpt.state.gamma);
  doc["pi"] = ckpt.state.pi;
  json trace = json::array();
  for (const auto& row : ckpt.trace)
    trace.push_back({row.iter, row.objective, row.penalty, row.theta_obj_start,
                     row.theta_obj_end});
  doc["trace"] = trace;

  std::ofstream out(path);
  if (!out) throw CheckpointError("cannot write checkpoint: " + path);
  out << doc.dump() << "\n";
  if (!out) throw CheckpointError("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw CheckpointError("malformed checkpoint " + path + ": " + e.what());
  }

  try {
    if (doc.value("format", "") != "wsptm-checkpoint")
      throw CheckpointError("not a wsptm checkpoint: " + path);
    if (doc.value("version", -1) != kVersion)
      throw CheckpointError("unsupported checkpoint version in " + path);

    Checkpoint ckpt;
    ckpt.config_kv = doc.at("config").get<std::map<std::string, std::string>>();
    ckpt.vocab_hash = std::stoull(doc.at("vocab_hash").get<std::string>());
    ckpt.state.theta = matrix_from_json(doc.at("theta"));
    ckpt.state.theta_hat = matrix_from_json(doc.at("theta_hat"));
    ckpt.state.phi = matrix_from_json(doc.at("phi"));
    ckpt.state.phi_hat = matrix_from_json(doc.at("phi_hat"));
    ckpt.state.gamma = matrix_from_json(doc.at("gamma"));
    ckpt.state.pi = doc.at("pi").get<std::vector<double>>();
    for (const auto& row : doc.at("trace"))
      ckpt.trace.push_back({row.at(0).get<int>(), row.at(1).get<double>(),
                            row.at(2).get<double>(), row.at(3).get<double>(),
                            row.at(4).get<double>()});
    return ckpt;
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError("malformed checkpoint " + path + ": " + e.what());
  }
}

std::string trace_csv(const std::vector<FitTraceRow>& trace) {
  std::ostringstream out;
  out << "iter,objective,penalty\n";
  char buf[80];
  for (const auto& row : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%.8f,%.8f\n", row.iter, row.objective, row.penalty);
    out << buf;
  }
  return out.str();
}

}  // namespace wsptm
