// Command-line front end: runs the verification pipeline on a model file and
// writes a JSON or CSV report. Exit codes: 0 all checks pass, 1 invariant
// failure, 2 input error.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "fermass/model_io.hpp"
#include "fermass/registry.hpp"
#include "fermass/report.hpp"

namespace {

std::map<std::string, fermass::ModelConfig (*)()> registry_models() {
  return {{"ew-reference", [] { return fermass::registry::ew_reference(); }},
          {"ew-down-quark", [] { return fermass::registry::ew_down_quark(); }},
          {"ew-up-quark", [] { return fermass::registry::ew_up_quark(); }},
          {"u1-phase", [] { return fermass::registry::u1_phase(); }}};
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw fermass::ModelError("cannot write '" + out + "'");
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fermass: fermionic mass matrices, vacuum Dirac-Yukawa operators and lattice spectra"};
  app.require_subcommand(1);

  std::string model_path, registry_name, out, format = "json", spectra_path, dump_path;
  double tol_scale = 1.0;

  std::vector<CLI::App*> runs;
  for (const char* name : {"check", "break", "masses", "lattice", "verify-all"}) {
    auto* sub = app.add_subcommand(name);
    auto* m = sub->add_option("--model", model_path, "model file (YAML)");
    auto* r = sub->add_option("--registry", registry_name, "use a built-in model instead of a file");
    m->excludes(r);
    sub->add_option("--out", out, "report destination (default stdout)");
    sub->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol-scale", tol_scale, "multiply every check tolerance")->check(CLI::PositiveNumber);
    if (std::string(name) == "lattice" || std::string(name) == "verify-all") {
      sub->add_option("--spectra", spectra_path, "write computed and closed-form spectra of (iD)^2 as CSV");
      sub->add_option("--dump-operator", dump_path, "write the vacuum Dirac-Yukawa operator as JSON");
    }
    runs.push_back(sub);
  }
  auto* reg = app.add_subcommand("registry", "print a built-in model as YAML");
  std::string reg_name;
  reg->add_option("name", reg_name)->required();
  reg->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  try {
    const auto models = registry_models();
    if (reg->parsed()) {
      auto it = models.find(reg_name);
      if (it == models.end()) throw fermass::ModelError("unknown registry model '" + reg_name + "'");
      emit(fermass::save_model(it->second()), out);
      return 0;
    }

    fermass::ModelConfig config;
    if (!registry_name.empty()) {
      auto it = models.find(registry_name);
      if (it == models.end()) throw fermass::ModelError("unknown registry model '" + registry_name + "'");
      config = it->second();
    } else if (!model_path.empty()) {
      config = fermass::load_model(model_path);
    } else {
      throw fermass::ModelError("one of --model or --registry is required");
    }
    config.tolerances = config.tolerances.scaled(tol_scale);

    fermass::LatticeOperator dirac;
    std::vector<std::vector<double>> spectra;
    const std::string cmd = app.get_subcommands().front()->get_name();
    fermass::Report report = cmd == "check"    ? fermass::cmd_check(config)
                             : cmd == "break"  ? fermass::cmd_break(config)
                             : cmd == "masses" ? fermass::cmd_masses(config)
                             : cmd == "lattice" ? fermass::cmd_lattice(config, &dirac, &spectra)
                                                : fermass::cmd_verify_all(config, &dirac, &spectra);

    if (!spectra_path.empty() && !spectra.empty()) {
      std::ofstream f(spectra_path);
      fermass::write_spectra_csv(f, {"computed", "closed_form"}, spectra);
    }
    if (!dump_path.empty() && dirac.size() > 0) emit(fermass::operator_to_json(dirac).dump() + "\n", dump_path);

    emit(format == "csv" ? report.to_csv() : report.to_json().dump(2) + "\n", out);
    return report.exit_code();
  } catch (const fermass::ModelError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const fermass::DimensionMismatch& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
