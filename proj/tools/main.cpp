#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "resodim/cli.hpp"

using namespace resodim;

int main(int argc, char** argv) {
  CLI::App app{
      "resodim: dimension experiments for sums and projections of "
      "self-similar sets"};
  app.allow_extras();
  std::string config_path;
  bool dry_run = false;
  app.add_option("--config", config_path, "key=value config file");
  app.add_flag("--dry-run", dry_run, "print planned work sizes and exit");
  app.footer("usage: resodim <subcommand> [key=value ...]\nsubcommands: "
             "resonance dim sumdim marstrand tower homogenize drop project "
             "render");
  CLI11_PARSE(app, argc, argv);

  if (const char* workers = std::getenv("RESODIM_WORKERS")) {
    char* end = nullptr;
    long n = std::strtol(workers, &end, 10);
    if (!end || *end != '\0' || n < 1) {
      std::cerr << R"({"error":{"type":"config","message":)"
                << R"("RESODIM_WORKERS must be a positive integer"}})" << "\n";
      return 1;
    }
  }

  std::string file_text;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << R"({"error":{"type":"config","message":"cannot read )"
                << config_path << R"("}})" << "\n";
      return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    file_text = buf.str();
  }

  // leftover tokens: first bare word is the subcommand, the rest override
  std::vector<std::string> overrides;
  for (const auto& tok : app.remaining()) overrides.push_back(tok);

  ConfigResult parsed = assemble_config(file_text, overrides, dry_run);
  if (!parsed.config) {
    nlohmann::json errs = nlohmann::json::array();
    for (const auto& e : parsed.errors) {
      errs.push_back({{"line", e.line},
                      {"col", e.col},
                      {"key", e.key},
                      {"message", e.message}});
    }
    nlohmann::json record = {{"error", {{"type", "config"}, {"errors", errs}}}};
    std::cerr << record.dump() << "\n";
    return 1;
  }

  RunResult res = run(*parsed.config);
  if (res.status != 0) {
    std::cerr << res.error_json;
    return res.status;
  }

  std::fputs(res.summary.c_str(), stdout);
  const std::string& artifact = res.svg.empty() ? res.csv : res.svg;
  if (!artifact.empty()) {
    std::string out_path = parsed.config->get("out", "");
    if (out_path.empty()) {
      std::fputs(artifact.c_str(), stdout);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << R"({"error":{"type":"config","message":"cannot write )"
                  << out_path << R"("}})" << "\n";
        return 1;
      }
      out << artifact;
    }
  }
  return 0;
}
