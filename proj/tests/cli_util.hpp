#pragma once

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace aol::test {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs the CLI through the shell; `args` is appended verbatim. `env` is a
/// prefix such as "AWESOME_OL_OUT=/tmp/x".
inline CliResult run_cli(const std::string& args, const std::filesystem::path& scratch, const std::string& env = "") {
  const auto out = scratch / "cli.stdout", err = scratch / "cli.stderr";
  const std::string cmd = "env -u AWESOME_OL_OUT " + env + " '" + std::string(AOL_CLI_PATH) + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

inline std::string config_path(const std::string& name) { return std::string(AOL_CONFIG_DIR) + "/" + name; }

}  // namespace aol::test
