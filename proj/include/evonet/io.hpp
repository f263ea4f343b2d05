#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace evonet::io {

/*----------------------------------------------------------------------------
 * File output helpers shared by the CLI tools.
 *
 * Output contract: CSV files carry a header row, comma separators, LF line
 * endings (streams are opened in binary mode so Windows never inserts CR),
 * and floats at 17 significant digits so a replayed run can be compared
 * byte-for-byte.
 *--------------------------------------------------------------------------*/

/* shortest-exact decimal rendering at 17 significant digits */
std::string fmt_g17(double v);

class csv_writer {
 public:
  explicit csv_writer(const std::string& path);
  ~csv_writer();

  csv_writer(const csv_writer&) = delete;
  csv_writer& operator=(const csv_writer&) = delete;

  /* one record; the trailing LF is appended here */
  void line(const std::string& text);

  /* flush and verify; throws std::runtime_error on a short write */
  void close();

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

/* current wall-clock time as e.g. 2024-05-31T12:00:00Z */
std::string iso8601_utc_now();

/*----------------------------------------------------------------------------
 * run manifest: every CLI run drops exactly one manifest.json into its
 * output directory.  Re-running `evonet --from-manifest <file>` replays the
 * stored subcommand with the stored resolved configuration and reproduces
 * the CSV outputs byte-identically (timestamps in the manifest itself are
 * the only fields that differ).
 *--------------------------------------------------------------------------*/

struct run_manifest {
  std::string tool_version = "evonet 1.0.0";
  std::string subcommand;
  nlohmann::json resolved;             // flat key -> value configuration
  std::uint64_t master_seed = 0;
  std::string started_at;              // ISO 8601 UTC
  std::string finished_at;
  std::vector<std::string> outputs;    // file names relative to the manifest

  nlohmann::json to_json() const;
  static run_manifest from_json(const nlohmann::json& j);

  void write(const std::string& path) const;
  static run_manifest read(const std::string& path);
};

} // namespace evonet::io
