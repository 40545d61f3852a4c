#include <knowmc/cli.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

// Usage problems exit with 2, matching the parse/model error convention.
int run(int argc, char** argv) {
  CLI::App app{"knowmc: model checking and evidence for probabilistic algorithmic knowledge"};
  app.require_subcommand(1);
  // Inherited by the subcommands, so --json works after the subcommand name.
  app.fallthrough();
  bool json_out = false;
  if (const char* env = std::getenv("KNOWMC_OUTPUT")) json_out = std::string(env) == "json";
  app.add_flag("--json", json_out, "machine-readable output (or set KNOWMC_OUTPUT=json)");

  knowmc::CheckOptions chk;
  auto* c_check = app.add_subcommand("check", "evaluate a formula in a model");
  c_check->add_option("model", chk.model_path, "model file (JSON)")->required();
  c_check->add_option("formula", chk.formula, "formula text")->required();
  c_check->add_option("--state", chk.state, "restrict to one state id");
  c_check->add_option("--point", chk.point, "derandomizer point index (needs --state)");

  knowmc::EvidenceOptions evo;
  auto* c_ev = app.add_subcommand("evidence", "evidence spaces and weights for a question");
  c_ev->add_option("model", evo.model_path, "model file (JSON)")->required();
  c_ev->add_option("formula", evo.formula, "objective question")->required();
  c_ev->add_option("--agent", evo.agent, "agent index (1-based)")->capture_default_str();
  c_ev->add_option("--label", evo.label, "restrict to one local label");

  knowmc::AuditOptions ado;
  std::string alpha_text, beta_text;
  auto* c_audit = app.add_subcommand("audit", "reliability and evidence-bound audit");
  c_audit->add_option("model", ado.model_path, "model file (JSON)")->required();
  c_audit->add_option("formula", ado.formula, "objective question")->required();
  c_audit->add_option("--agent", ado.agent, "agent index (1-based)")->capture_default_str();
  c_audit->add_option("--alpha", alpha_text, "reliability pair to test (with --beta)");
  c_audit->add_option("--beta", beta_text, "reliability pair to test (with --alpha)");

  knowmc::DyOptions dyo;
  auto* c_dy = app.add_subcommand("dy", "intruder derivability and guessing analysis");
  c_dy->add_option("goal", dyo.goal, "goal message")->required();
  c_dy->add_option("--model", dyo.model_path, "model file (JSON); takes the local state from it");
  c_dy->add_option("--agent", dyo.agent, "agent index (1-based, model mode)")
      ->capture_default_str();
  c_dy->add_option("--state", dyo.state, "state id (model mode)");
  c_dy->add_option("--key", dyo.keys, "key declaration name[:inverse] (inline mode)");
  c_dy->add_option("--initkey", dyo.initkeys, "initially held key (inline mode)");
  c_dy->add_option("--recv", dyo.received, "intercepted message (inline mode)");
  c_dy->add_option("--guesses", dyo.guesses, "number of uniform key guesses");
  c_dy->add_flag("--enumerate", dyo.enumerate, "list every guess tuple");

  knowmc::ScenarioOptions sco;
  auto* c_sc = app.add_subcommand("scenario", "emit a built-in model");
  c_sc->add_option("name", sco.name, "coin | sensor | primality | rp | bpp | guess | random")
      ->required();
  c_sc->add_option("--max", sco.sensor_max, "sensor: wall distance range")->capture_default_str();
  c_sc->add_option("--query", sco.sensor_query, "sensor: queried distance")
      ->capture_default_str();
  c_sc->add_option("--n", sco.primality_n, "primality: the tested number")
      ->capture_default_str();
  c_sc->add_option("--key", sco.keys, "guess: key declaration name[:inverse]");
  c_sc->add_option("--initkey", sco.initkeys, "guess: initially held key");
  c_sc->add_option("--recv", sco.received, "guess: intercepted message");
  c_sc->add_option("--guesses", sco.guesses, "guess: guesses per run")->capture_default_str();
  c_sc->add_option("--seed", sco.seed, "random: seed")->capture_default_str();
  c_sc->add_option("--states", sco.random_params.n_states, "random: state count")
      ->capture_default_str();
  c_sc->add_option("--agents", sco.random_params.n_agents, "random: agent count")
      ->capture_default_str();
  c_sc->add_option("--tokens", sco.random_params.n_tokens, "random: tokens per agent")
      ->capture_default_str();
  c_sc->add_option("--props", sco.random_params.n_props, "random: proposition count")
      ->capture_default_str();
  c_sc->add_flag("--complete", sco.random_params.force_complete,
                 "random: draw answers from {Yes, No} only");
  c_sc->add_flag("--respect-negation", sco.random_params.force_respect_negation,
                 "random: derive negated-query rows");
  c_sc->add_flag("--deterministic", sco.random_params.deterministic,
                 "random: answers ignore the token");
  c_sc->add_option("-o,--out", sco.out_path, "write the model here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  knowmc::Outcome out;
  try {
    if (c_check->parsed()) {
      out = knowmc::cmd_check(chk);
    } else if (c_ev->parsed()) {
      out = knowmc::cmd_evidence(evo);
    } else if (c_audit->parsed()) {
      if (!alpha_text.empty()) ado.alpha = knowmc::parse_rat(alpha_text);
      if (!beta_text.empty()) ado.beta = knowmc::parse_rat(beta_text);
      out = knowmc::cmd_audit(ado);
    } else if (c_dy->parsed()) {
      out = knowmc::cmd_dy(dyo);
    } else if (c_sc->parsed()) {
      out = knowmc::cmd_scenario(sco);
    }
  } catch (const knowmc::ParseError& e) {
    std::cerr << "parse error at offset " << e.offset << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (json_out)
    std::cout << out.data.dump(2) << "\n";
  else
    std::cout << out.text;
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
