// pws: parse part-whole models, compute state semantics, check safety and
// liveness rules, extract interfaces, simulate holarchies and export DOT.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pws/compose.hpp"
#include "pws/dot.hpp"
#include "pws/dsl.hpp"
#include "pws/sim.hpp"
#include "pws/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;  // property failure or runtime error
constexpr int kExitModelError = 2;

struct LoadedModel {
  pws::SourceModel source;
  std::vector<std::string> files;
  std::vector<int> first_line;  // global line where each file starts
};

// Files are concatenated and parsed as one document; error lines are mapped
// back to the owning file.
int load_models(const std::vector<std::string>& paths, LoadedModel& out) {
  std::string text;
  int line = 1;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      std::cerr << "pws: cannot open '" << path << "'\n";
      return kExitModelError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();
    out.files.push_back(path);
    out.first_line.push_back(line);
    line += static_cast<int>(std::count(content.begin(), content.end(), '\n')) + 1;
    text += content;
    text += "\n";
  }
  pws::ParseResult parsed = pws::parse_model(text);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) {
      if (e.span.known()) {
        std::size_t which = 0;
        for (std::size_t i = 0; i < out.first_line.size(); ++i)
          if (out.first_line[i] <= e.span.line) which = i;
        std::cerr << out.files[which] << ":" << (e.span.line - out.first_line[which] + 1) << ":"
                  << e.span.col << ": " << e.code << ": " << e.message << "\n";
      } else {
        std::cerr << "pws: " << e.code << ": " << e.message << "\n";
      }
    }
    return kExitModelError;
  }
  out.source = std::move(*parsed.model);
  return kExitOk;
}

int select_system(const LoadedModel& loaded, const std::string& requested,
                  const pws::PwsSystem** out) {
  const pws::Model& model = loaded.source.model;
  if (!requested.empty()) {
    *out = model.find_system(requested);
    if (!*out) {
      std::cerr << "pws: unknown system '" << requested << "'\n";
      return kExitModelError;
    }
    return kExitOk;
  }
  if (model.systems.size() == 1) {
    *out = &model.systems.front();
    return kExitOk;
  }
  std::cerr << "pws: model declares " << model.systems.size()
            << " systems; pick one with --system\n";
  return kExitModelError;
}

bool color_enabled() {
  const char* v = std::getenv("PWS_COLOR");
  return v && std::string(v) == "1";
}

int read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "pws: cannot open '" << path << "'\n";
    return kExitModelError;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  *out = buf.str();
  return kExitOk;
}

int cmd_check(const std::vector<std::string>& files, const std::string& system_name,
              const std::string& format) {
  if (files.size() < 2) {
    std::cerr << "pws: check needs model files and a property file\n";
    return kExitModelError;
  }
  std::vector<std::string> model_files(files.begin(), files.end() - 1);
  LoadedModel loaded;
  if (int rc = load_models(model_files, loaded)) return rc;
  const pws::PwsSystem* sys = nullptr;
  if (int rc = select_system(loaded, system_name, &sys)) return rc;

  std::string props_text;
  if (int rc = read_file(files.back(), &props_text)) return rc;
  pws::PropertiesResult props = pws::parse_properties(props_text, loaded.source.model, *sys);
  if (!props.ok()) {
    for (const auto& e : props.errors)
      std::cerr << files.back() << ":" << e.span.line << ":" << e.span.col << ": " << e.code
                << ": " << e.message << "\n";
    return kExitModelError;
  }

  auto view = pws::AssemblyView::bind_declared(loaded.source.model, *sys);
  if (!view.ok()) {
    std::cerr << "pws: " << view.error().message << "\n";
    return kExitModelError;
  }
  pws::VerificationReport report = pws::verify(view.value(), props.properties);
  if (format == "json")
    std::cout << pws::report_json(report);
  else
    std::cout << pws::report_text(report, color_enabled());
  return report.all_hold() && report.clean() ? kExitOk : kExitFailure;
}

int cmd_sem(const std::vector<std::string>& files, const std::string& system_name,
            const std::string& format, bool oracle, std::size_t max_product) {
  LoadedModel loaded;
  if (int rc = load_models(files, loaded)) return rc;
  const pws::PwsSystem* sys = nullptr;
  if (int rc = select_system(loaded, system_name, &sys)) return rc;

  auto view = pws::AssemblyView::bind_declared(loaded.source.model, *sys);
  if (!view.ok()) {
    std::cerr << "pws: " << view.error().message << "\n";
    return kExitModelError;
  }
  pws::SemanticsResult sem = pws::compute_semantics(view.value());
  for (const auto& d : sem.diagnostics)
    std::cerr << (d.severity == pws::SemDiagnostic::Severity::Error ? "error: " : "warning: ")
              << (d.transition_id.empty() ? "" : "[" + d.transition_id + "] ") << d.message
              << "\n";

  if (oracle) {
    auto flat = pws::flatten(view.value(), max_product);
    if (!flat.ok()) {
      std::cerr << "pws: oracle: " << flat.error().message << "\n";
      return kExitModelError;
    }
    if (flat.value().by_state != sem.map.entries) {
      std::cerr << "pws: oracle mismatch: flatten disagrees with the fixpoint\n";
      return kExitFailure;
    }
  }

  if (format == "json") {
    nlohmann::ordered_json j;
    j["system"] = sys->name;
    auto& entries = j["semantics"] = nlohmann::ordered_json::object();
    for (const auto& s : sem.map.order) {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& c : sem.map.at(s)) arr.push_back(c);
      entries[s] = std::move(arr);
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << pws::format_semantics(sem.map);
  }
  return kExitOk;
}

int cmd_extract(const std::vector<std::string>& files, const std::string& system_name,
                const std::string& out_path) {
  LoadedModel loaded;
  if (int rc = load_models(files, loaded)) return rc;
  const pws::PwsSystem* sys = nullptr;
  if (int rc = select_system(loaded, system_name, &sys)) return rc;

  auto itf = pws::extract_interface(*sys);
  if (!itf.ok()) {
    std::cerr << "pws: " << itf.error().code << ": " << itf.error().message << "\n";
    return kExitModelError;
  }
  std::string text = pws::serialize_interface(itf.value());
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "pws: cannot write '" << out_path << "'\n";
      return kExitModelError;
    }
    out << text;
  }
  return kExitOk;
}

int cmd_dot(const std::vector<std::string>& files, const std::string& target, bool with_sem) {
  LoadedModel loaded;
  if (int rc = load_models(files, loaded)) return rc;
  const pws::Model& model = loaded.source.model;

  const pws::PwsSystem* sys = nullptr;
  if (!target.empty()) {
    sys = model.find_system(target);
    if (!sys) {
      const pws::StateInterface* itf = model.find_interface(target);
      if (!itf) {
        std::cerr << "pws: unknown target '" << target << "'\n";
        return kExitModelError;
      }
      std::cout << pws::dot_interface(*itf);
      return kExitOk;
    }
  } else {
    if (int rc = select_system(loaded, "", &sys)) return rc;
  }

  if (!with_sem) {
    std::cout << pws::dot_system(*sys);
    return kExitOk;
  }
  auto view = pws::AssemblyView::bind_declared(model, *sys);
  if (!view.ok()) {
    std::cerr << "pws: " << view.error().message << "\n";
    return kExitModelError;
  }
  pws::SemanticsResult sem = pws::compute_semantics(view.value());
  std::cout << pws::dot_system(*sys, &sem.map);
  return kExitOk;
}

int cmd_sim(const std::vector<std::string>& files, const std::string& holarchy_name,
            const std::string& format, bool assert_sem) {
  if (files.size() < 2) {
    std::cerr << "pws: sim needs model files and a script file\n";
    return kExitModelError;
  }
  std::vector<std::string> model_files(files.begin(), files.end() - 1);
  LoadedModel loaded;
  if (int rc = load_models(model_files, loaded)) return rc;

  const pws::HolarchyDecl* decl = nullptr;
  for (const auto& h : loaded.source.holarchies) {
    if (!holarchy_name.empty() && h.name != holarchy_name) continue;
    if (decl && holarchy_name.empty()) {
      std::cerr << "pws: model declares several holarchies; pick one with --holarchy\n";
      return kExitModelError;
    }
    decl = &h;
  }
  if (!decl && !holarchy_name.empty()) {
    std::cerr << "pws: unknown holarchy '" << holarchy_name << "'\n";
    return kExitModelError;
  }

  std::optional<pws::Holarchy> holarchy;
  if (decl) {
    auto built = pws::build_holarchy(loaded.source.model, *decl);
    if (!built.ok()) {
      std::cerr << "pws: " << built.error().code << ": " << built.error().message << "\n";
      return kExitModelError;
    }
    holarchy.emplace(std::move(built.value()));
  } else {
    // No holarchy declared: run the sole system over its declared interfaces.
    const pws::PwsSystem* sys = nullptr;
    if (int rc = select_system(loaded, "", &sys)) return rc;
    auto built = pws::Holarchy::root(loaded.source.model, *sys);
    if (!built.ok()) {
      std::cerr << "pws: " << built.error().code << ": " << built.error().message << "\n";
      return kExitModelError;
    }
    holarchy.emplace(std::move(built.value()));
  }

  std::string script_text;
  if (int rc = read_file(files.back(), &script_text)) return rc;
  auto script = pws::parse_script(script_text);
  if (!script.ok()) {
    std::cerr << files.back() << ":" << script.error().span.line << ": "
              << script.error().message << "\n";
    return kExitModelError;
  }

  auto trace = pws::run(*holarchy, script.value(), assert_sem);
  if (!trace.ok()) {
    std::cerr << "pws: " << trace.error().code << ": " << trace.error().message << "\n";
    return kExitFailure;
  }
  if (format == "json")
    std::cout << pws::trace_json(trace.value());
  else
    std::cout << pws::trace_text(trace.value());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Part-whole statechart toolkit"};
  app.require_subcommand(1);

  std::string system_name, holarchy_name, format = "text", out_path, target;
  bool with_sem = false, assert_sem = false, oracle = false;
  std::size_t max_product = 1000000;
  std::vector<std::string> files;

  auto* check = app.add_subcommand("check", "Verify properties of a system");
  check->add_option("files", files, "model files, then a property file")->required();
  check->add_option("--system", system_name, "system to check");
  check->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

  auto* sem = app.add_subcommand("sem", "Print the state semantics of a system");
  sem->add_option("files", files, "model files")->required();
  sem->add_option("--system", system_name, "system to analyze");
  sem->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));
  sem->add_flag("--oracle", oracle, "cross-check against exhaustive product exploration");
  sem->add_option("--max-product", max_product, "product-state cap for --oracle");

  auto* extract = app.add_subcommand("extract", "Emit the interface of a system");
  extract->add_option("files", files, "model files")->required();
  extract->add_option("--system", system_name, "system to extract");
  extract->add_option("--out", out_path, "write to file instead of stdout");

  auto* sim = app.add_subcommand("sim", "Run an injection script against a holarchy");
  sim->add_option("files", files, "model files, then a script file")->required();
  sim->add_option("--holarchy", holarchy_name, "holarchy to instantiate");
  sim->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));
  sim->add_flag("--assert-sem", assert_sem,
                "assert configuration membership in sem(whole state) after each macro-step");

  auto* dot = app.add_subcommand("dot", "Emit a Graphviz digraph");
  dot->add_option("files", files, "model files")->required();
  dot->add_option("--target", target, "system or interface to render");
  dot->add_flag("--sem", with_sem, "annotate whole states with their semantics");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return cmd_check(files, system_name, format);
  if (sem->parsed()) return cmd_sem(files, system_name, format, oracle, max_product);
  if (extract->parsed()) return cmd_extract(files, system_name, out_path);
  if (sim->parsed()) return cmd_sim(files, holarchy_name, format, assert_sem);
  if (dot->parsed()) return cmd_dot(files, target, with_sem);
  return kExitModelError;
}
