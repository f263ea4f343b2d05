#include "evonet/io.hpp"

#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace evonet::io {

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

csv_writer::csv_writer(const std::string& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("csv_writer: cannot open " + path);
}

csv_writer::~csv_writer() {
  if (out_.is_open()) out_.close();  // best effort; close() reports errors
}

void csv_writer::line(const std::string& text) {
  out_ << text << '\n';
}

void csv_writer::close() {
  if (!out_.is_open()) return;
  out_.flush();
  if (!out_) throw std::runtime_error("csv_writer: write failed for " + path_);
  out_.close();
  if (out_.fail()) throw std::runtime_error("csv_writer: close failed for " + path_);
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return std::string(buf);
}

nlohmann::json run_manifest::to_json() const {
  nlohmann::json j;
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["resolved"] = resolved;
  j["master_seed"] = master_seed;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["outputs"] = outputs;
  return j;
}

run_manifest run_manifest::from_json(const nlohmann::json& j) {
  run_manifest m;
  m.tool_version = j.at("tool_version").get<std::string>();
  m.subcommand = j.at("subcommand").get<std::string>();
  m.resolved = j.at("resolved");
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.started_at = j.value("started_at", std::string());
  m.finished_at = j.value("finished_at", std::string());
  if (j.contains("outputs"))
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
  return m;
}

void run_manifest::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("manifest: cannot open " + path);
  out << to_json().dump(2) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("manifest: write failed for " + path);
}

run_manifest run_manifest::read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("manifest: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("manifest: " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

} // namespace evonet::io
