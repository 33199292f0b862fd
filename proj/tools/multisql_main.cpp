#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "msql/session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"multisql: an embeddable multi-model query engine"};

  std::string load_path;
  std::string script_path;
  std::string mode = "table";
  bool keep_going = false;
  app.add_option("--load", load_path, "replay a snapshot before running");
  app.add_option("--script", script_path, "execute a script file and exit");
  app.add_option("--mode", mode, "output mode: table or json")
      ->check(CLI::IsMember({"table", "json"}));
  app.add_flag("--keep-going", keep_going, "continue a script after statement errors");

  CLI11_PARSE(app, argc, argv);

  msql::Session session;
  session.set_mode(mode == "json" ? msql::OutputMode::JsonText : msql::OutputMode::Table);

  if (!load_path.empty()) {
    try {
      session.load_snapshot(load_path);
    } catch (const msql::Error& e) {
      std::cerr << load_path << ": " << e.what() << "\n";
      return e.code() == msql::ErrorCode::IoError ? 2 : 1;
    }
  }
  if (!script_path.empty()) {
    return msql::run_script(session, script_path, keep_going, std::cout, std::cerr);
  }
  return msql::repl(session, std::cin, std::cout, std::cerr);
}
