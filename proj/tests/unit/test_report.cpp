#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "fermass/model_io.hpp"
#include "fermass/registry.hpp"
#include "fermass/report.hpp"

using namespace fermass;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FERMASS_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Report, VerifyAllPassesOnReferenceModel) {
  const auto r = cmd_verify_all(registry::ew_reference());
  for (const auto& c : r.checks()) EXPECT_TRUE(c.pass) << c.section << "." << c.name << " = " << c.value;
  EXPECT_EQ(r.exit_code(), 0);
  const auto j = r.to_json();
  EXPECT_EQ(j["report_schema"], 1);
  EXPECT_EQ(j["vacuum"]["isotropy"]["dim"], 1);
  EXPECT_EQ(j["vacuum"]["goldstone_count"], 3);
  EXPECT_NEAR(j["masses"]["mean_mass"].get<double>(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(j["lagrangian"]["per_site_trace"].get<double>(), 4.0, 1e-9);
  EXPECT_EQ(j["lemma"]["clauses"]["orbit_invariance"], true);
  EXPECT_EQ(j["summary"]["passed"], true);
}

TEST(Report, OtherRegistryModelsPass) {
  for (const auto& c : {registry::ew_down_quark(), registry::ew_up_quark(), registry::u1_phase()}) {
    const auto r = cmd_verify_all(c);
    for (const auto& ch : r.checks()) EXPECT_TRUE(ch.pass) << c.name << ": " << ch.section << "." << ch.name;
  }
}

TEST(Report, IsByteIdenticalAcrossRuns) {
  const auto a = cmd_verify_all(registry::ew_reference()).to_json().dump(2);
  const auto b = cmd_verify_all(registry::ew_reference()).to_json().dump(2);
  EXPECT_EQ(a, b);
  EXPECT_EQ(cmd_masses(registry::ew_reference()).to_csv(), cmd_masses(registry::ew_reference()).to_csv());
}

TEST(Report, PerturbedHyperchargeFailsWithNamedClause) {
  const auto r = cmd_masses(registry::ew_reference(0.5, -2.1));
  EXPECT_EQ(r.exit_code(), 1);
  const auto j = r.to_json();
  EXPECT_EQ(j["lemma"]["clauses"]["orbit_invariance"], false);
  // the singlet charge no longer matches the lower doublet slot, so the commutant clause fails too
  EXPECT_EQ(j["lemma"]["clauses"]["commutant"], false);
  EXPECT_NE(j["lemma"]["lemma_violation"].get<std::string>().find("not G-equivariant"), std::string::npos);
  EXPECT_FALSE(j["masses"]["checks"]["yukawa_equivariance"]["pass"].get<bool>());
}

TEST(Report, SaddleSeedIsRecordedAsFailure) {
  auto c = registry::ew_reference();
  c.seed = Vec::Zero(2);
  const auto r = cmd_masses(c);
  EXPECT_EQ(r.exit_code(), 1);
  EXPECT_EQ(r.to_json()["vacuum"]["error"]["kind"], "SaddleConverged");
  EXPECT_FALSE(r.body().contains("masses"));
}

TEST(Report, CsvHasOneRowPerCheck) {
  const auto r = cmd_check(registry::ew_reference());
  const auto csv = r.to_csv();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.checks().size() + 1);
  EXPECT_EQ(csv.rfind("section,check,value,relation,tolerance,pass\n", 0), 0u);
}

TEST(Report, ToleranceScalingLoosensChecks) {
  auto c = registry::ew_reference(0.5, -2.0 - 1e-11);
  EXPECT_EQ(cmd_check(c).exit_code(), 1);
  c.tolerances = c.tolerances.scaled(100.0);
  EXPECT_EQ(cmd_check(c).exit_code(), 0);
  EXPECT_EQ(c.tolerances.rank_cut, Tolerances{}.rank_cut);
}

TEST(Cli, ExitCodes) {
  const std::string dir = FERMASS_BINARY_DIR;
  EXPECT_EQ(run_cli("verify-all --registry ew-reference --out " + dir + "/cli_ref.json"), 0);
  EXPECT_EQ(run_cli("masses --model " FERMASS_SOURCE_DIR "/models/ew_perturbed_yR.yaml"), 1);
  EXPECT_EQ(run_cli("check --model /nonexistent.yaml"), 2);
  EXPECT_EQ(run_cli("check --registry no-such-model"), 2);
}

TEST(Cli, RegistryOutputLoadsBack) {
  const std::string path = std::string(FERMASS_BINARY_DIR) + "/cli_registry_up.yaml";
  ASSERT_EQ(run_cli("registry ew-up-quark --out " + path), 0);
  EXPECT_TRUE(load_model(path) == registry::ew_up_quark());
}

TEST(Cli, SpectraAndOperatorDump) {
  const std::string dir = FERMASS_BINARY_DIR;
  ASSERT_EQ(run_cli("lattice --registry ew-reference --format csv --out " + dir + "/cli_lat.csv --spectra " + dir +
                    "/cli_spectra.csv --dump-operator " + dir + "/cli_op.json"),
            0);
  const auto spectra = slurp(dir + "/cli_spectra.csv");
  EXPECT_EQ(spectra.rfind("index,computed,closed_form\n", 0), 0u);
  EXPECT_EQ(std::count(spectra.begin(), spectra.end(), '\n'), 1 + 16 * 2 * 3);
  const auto op = operator_from_json(nlohmann::json::parse(slurp(dir + "/cli_op.json")));
  EXPECT_EQ(op.size(), 96);
  EXPECT_EQ(op.kind, "vacuum_dirac");
  const auto s = registry::ew_reference();
  EXPECT_TRUE(op.sources == std::vector<std::string>{s.name});
}
