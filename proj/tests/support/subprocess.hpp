#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Runs the pws binary with the given argument string, capturing both streams.
inline RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string base = "/tmp/pws_test_" + std::to_string(getpid()) + "_" + std::to_string(counter++);
  std::string out_path = base + ".out";
  std::string err_path = base + ".err";
  std::string cmd = std::string(PWS_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  int rc = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(rc);
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

inline std::string models_dir() { return PWS_MODELS_DIR; }

inline std::string model_path(const std::string& name) { return models_dir() + "/" + name; }

inline int count_occurrences(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace testutil
