#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsp/cones.hpp"
#include "rsp/local_zeta.hpp"
#include "rsp/relevance.hpp"
#include "rsp/version.hpp"

using nlohmann::json;
using namespace rsp;

namespace {

struct Config {
  std::string command;
  int n = 1;
  std::string pair_path, registry_path, order = "both", out_path, m = "n+1";
  std::uint64_t seed = 1;
  int digits = 20;
  long M = 0, side = 20;
  int max_threshold = 5;
  std::string q = "2", x = "1/3", y = "1/5", u = "1/7";
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + ": malformed JSON: " + e.what());
  }
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// Everything the report depends on is hashed: command, flags and input bytes.
class Inputs {
 public:
  explicit Inputs(const Config& c) : cfg_(c) {
    std::ostringstream os;
    os << c.command << '\n'
       << c.n << '\n'
       << c.order << '\n'
       << c.m << '\n'
       << c.seed << '\n'
       << c.digits << '\n'
       << c.M << '\n'
       << c.side << '\n'
       << c.max_threshold << '\n'
       << c.q << ' ' << c.x << ' ' << c.y << ' ' << c.u << '\n';
    hash_ = fnv1a(os.str());
  }

  const AtomRegistry& registry() {
    if (!reg_) {
      std::string path = cfg_.registry_path;
      if (path.empty() && !registry_ref_.empty()) path = registry_ref_;
      if (path.empty()) {
        reg_ = shape_registry(7);
      } else {
        auto text = read_file(path);
        hash_ = fnv1a(text, hash_);
        reg_ = AtomRegistry::from_json(parse_json(text, path));
      }
    }
    return *reg_;
  }

  InducingPair pair() {
    if (cfg_.pair_path.empty()) throw ValidationError("--pair is required for " + cfg_.command);
    auto text = read_file(cfg_.pair_path);
    hash_ = fnv1a(text, hash_);
    json j = parse_json(text, cfg_.pair_path);
    if (j.contains("registry_ref") && cfg_.registry_path.empty()) {
      if (!j["registry_ref"].is_string()) throw ValidationError("pair: /registry_ref must be a string");
      std::string ref = j["registry_ref"];
      auto slash = cfg_.pair_path.find_last_of('/');
      registry_ref_ = (ref.empty() || ref[0] == '/' || slash == std::string::npos)
                          ? ref
                          : cfg_.pair_path.substr(0, slash + 1) + ref;
    }
    return InducingPair::from_json(j, &registry());
  }

  std::uint64_t hash() const { return hash_; }

 private:
  const Config& cfg_;
  std::uint64_t hash_;
  std::optional<AtomRegistry> reg_;
  std::string registry_ref_;
};

json rat(const Rational& q) { return to_string(q); }

json rats(const Vec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(rat(x));
  return a;
}

json mero(const FormalMero& F) {
  json j;
  j["zero"] = F.is_zero();
  j["prefactor"] = rat(F.prefactor());
  j["canonical"] = F.str();
  j["atoms"] = static_cast<int>(F.atoms().size());
  return j;
}

json rs_json(const RSParabolic& P) {
  return {{"p_std", P.p_std}, {"i0", P.i0}, {"p_h", P.p_h}, {"standard", P.is_standard()},
          {"p_n", P.p_n.str()}, {"p_np1", P.p_np1.str()}, {"label", P.str()}};
}

json weyl(const WeylElement& w) { return w.images(); }

// ------------------------------------------------------------------ commands

json cmd_enumerate_rs(const Config& c) {
  if (c.n < 1 || c.n > 8) throw ValidationError("--n must be between 1 and 8");
  json j;
  auto all = enumerate_rs(c.n);
  j["count"] = all.size();
  j["parabolics"] = json::array();
  for (const auto& P : all) {
    json e = rs_json(P);
    e["defining_property"] = satisfies_defining_property(P.p_n, P.p_np1);
    j["parabolics"].push_back(e);
  }
  if (c.n <= 4) j["brute_force_count"] = brute_force_rs(c.n).size();
  return j;
}

json cmd_pair_validate(Inputs& in) {
  auto p = in.pair();
  json j;
  j["valid"] = true;
  j["n"] = p.n();
  j["k"] = p.k();
  j["D"] = p.D();
  j["dim"] = p.dim();
  j["coordinates"] = p.names();
  j["pi_coordinates"] = p.pi_names();
  j["pair"] = p.to_json();
  j["relevant_sizes"] = {{"pi_n", p.pi_sizes(0)}, {"pi_np1", p.pi_sizes(1)}, {"p_n", p.p_sizes(0)},
                         {"p_np1", p.p_sizes(1)}};
  return j;
}

json cmd_pair_forms(Inputs& in) {
  auto p = in.pair();
  auto s = singular_forms(p);
  json j;
  j["L_plus"] = json::array();
  j["L_minus"] = json::array();
  j["labels_plus"] = json::array();
  j["labels_minus"] = json::array();
  for (const auto& f : s.plus) {
    j["L_plus"].push_back(f.display(p.names()));
    j["labels_plus"].push_back(f.label());
  }
  for (const auto& f : s.minus) {
    j["L_minus"].push_back(f.display(p.names()));
    j["labels_minus"].push_back(f.label());
  }
  auto H = intersection_check(p);
  j["intersection"]["dim"] = H.dim();
  j["intersection"]["equations"] = json::array();
  for (const auto& e : H.equations()) j["intersection"]["equations"].push_back(e.str(p.names()) + " = 0");
  auto map = a_pi_minus_nu(p);
  j["intersection"]["minus_nu_pi"] = rats(map.b);
  return j;
}

json run_json(const InducingPair& p, const PipelineRun& r) {
  json j;
  j["order"] = r.order;
  j["steps"] = json::array();
  for (const auto& s : r.steps)
    j["steps"].push_back({{"label", s.label},
                          {"form", s.form.str(p.names())},
                          {"pole_order", s.divisor.order},
                          {"generic", s.divisor.generic},
                          {"pole_atoms", s.divisor.pole_atoms.size()}});
  j["result"] = mero(r.on_a_pi);
  return j;
}

json cmd_pair_residues(const Config& c, Inputs& in) {
  auto p = in.pair();
  const auto& reg = in.registry();
  json j;
  if (c.order == "first" || c.order == "second") {
    auto K = zeta_kernel(p, reg);
    auto r = run_residues(p, K, c.order == "first" ? first_order(p) : second_order(p));
    j["runs"] = json::array({run_json(p, r)});
    j["canonical"] = mero(r.on_a_pi);
    return j;
  }
  if (c.order != "both") throw ValidationError("--order must be first, second or both");
  auto rep = global_residue_pipeline(p, reg, c.seed);
  j["runs"] = json::array();
  for (const auto& r : rep.runs) j["runs"].push_back(run_json(p, r));
  j["canonical"] = mero(rep.canonical);
  j["cl"] = mero(rep.cl);
  j["order_independent"] = rep.order_independent;
  j["matches_cl"] = rep.matches_cl;
  return j;
}

json cmd_pair_criterion(Inputs& in) {
  auto p = in.pair();
  const auto& reg = in.registry();
  auto cs = cl_star(p, reg);
  auto factors = [](const std::vector<ClFactor>& v) {
    json a = json::array();
    for (const auto& f : v)
      a.push_back({{"pair", f.pair}, {"at", rat(f.at)}, {"pole", f.pole}, {"verdict", to_string(f.verdict)}});
    return a;
  };
  json j;
  j["cl"] = mero(cl_quotient(p, reg));
  j["numerator"] = factors(cs.numerator);
  j["denominator"] = factors(cs.denominator);
  j["value"] = mero(cs.value);
  j["verdict"] = to_string(cs.verdict);
  return j;
}

json cmd_pair_weyl(Inputs& in) {
  auto p = in.pair();
  auto W = residue_weyl_data(p);
  auto bw = [](const BlockWeyl& b) {
    return json{{"blocks_n", b.perm_n}, {"blocks_np1", b.perm_np1}, {"w_n", weyl(b.w_n)}, {"w_np1", weyl(b.w_np1)}};
  };
  json j;
  j["w1"] = bw(W.w1);
  j["w2"] = bw(W.w2);
  j["wstar_pi_n"] = bw(W.wstar_n);
  j["wstar_pi_np1"] = bw(W.wstar_np1);
  j["w_plus"] = bw(W.w_plus);
  j["w1_wstar_np1"] = {weyl(W.w1_star_n), weyl(W.w1_star_np1)};
  j["w2_wstar_n"] = {weyl(W.w2_star_n), weyl(W.w2_star_np1)};
  j["q_pi"] = {W.q_pi_n, W.q_pi_np1};
  j["p_res"] = rs_json(W.p_res);
  j["p_plus"] = rs_json(W.p_plus);
  j["p_plus_pi"] = {W.p_plus_pi_n, W.p_plus_pi_np1};
  auto s = sigma1_products_check(p);
  j["sigma1_identities"] = {{"first", s.first.size()}, {"second", s.second.size()},
                            {"random_points", s.random_points}, {"holds", true}};
  return j;
}

json cmd_cones_ft(const Config& c) {
  if (c.n < 1 || c.n > 4) throw ValidationError("--n must be between 1 and 4");
  std::mt19937_64 rng(c.seed);
  auto rq = [&](int lo, int hi) { return frac(lo * 8 + static_cast<long>(rng() % ((hi - lo) * 8 + 1)), 8); };
  json j;
  j["pairs"] = json::array();
  for (auto& cp : cone_pairs(c.n, 2)) {
    const auto& rz = cp.rz;
    // lambda with negative pairings against the coweights, so the integral converges
    Vec lam(rz.P.m());
    for (auto& x : lam) x = rq(-2, 2);
    for (int k = 0; k < rz.dim; ++k) {
      Rational want = rq(-3, 0) - frac(1, 4);
      lam = add(lam, scale(want - dot(lam, rz.coweights[k]), rz.roots[k]));
    }
    json e;
    e["P"] = cp.P().str();
    e["Q"] = cp.Q().str();
    e["rank"] = rz.dim;
    e["lambda"] = rats(lam);
    Rational exact = rz.dim == 0 ? Rational(1) : ft_cone(cp, lam);
    Rational th = theta_hat(cp, lam);
    e["ft"] = rat(exact);
    e["eps_over_theta_hat"] = rat(Rational(cp.eps()) / th);
    e["agree"] = exact == Rational(cp.eps()) / th;
    if (rz.dim >= 1 && rz.dim <= 2) {
      std::vector<double> ld;
      for (const auto& x : lam) ld.push_back(x.get_d());
      e["numeric_quadrature"] = ft_cone_quadrature(cp, ld);
    }
    j["pairs"].push_back(e);
  }
  return j;
}

json cmd_local_partition(const Config& c) {
  if (c.n < 1 || c.n > 4) throw ValidationError("--n (the rank) must be between 1 and 4");
  if (c.side < 0 || c.side > 200) throw ValidationError("--side must be between 0 and 200");
  auto spec = LatticeSpec::rs_standard(c.n);
  const std::uint64_t salt = c.seed;
  const int span = 2 * c.max_threshold + 1;
  Thresholds th = [salt, span, &c](const std::vector<long>& a) {
    std::uint64_t h = fnv1a(std::to_string(salt));
    for (long x : a) h = (h ^ static_cast<std::uint64_t>(x)) * 1099511628211ULL;
    return std::optional<long>(static_cast<long>(h % static_cast<std::uint64_t>(span)) - c.max_threshold);
  };
  auto cosets = lattice_partition(spec, c.M, th);
  auto chk = check_partition(spec, c.M, th, cosets, c.side);
  json j;
  j["rank"] = c.n;
  j["M"] = c.M;
  j["cosets"] = json::array();
  for (const auto& k : cosets)
    j["cosets"].push_back({{"base", k.base},
                           {"root_values", k.base_values},
                           {"Q", k.q_std},
                           {"m_prime", k.m_prime},
                           {"threshold", k.threshold}});
  j["check"] = {{"box_side", c.side},          {"points", chk.points},   {"uncovered", chk.uncovered},
                {"overlaps", chk.overlaps},    {"strays", chk.strays},   {"threshold_violations", chk.threshold_violations},
                {"ok", chk.ok()}};
  if (!chk.ok()) throw AssertionFailure("local-partition: decomposition check failed\n" + j["check"].dump());
  return j;
}

json gl1gl2_json(const Gl1Gl2Report& r) {
  json j;
  j["point"] = {{"q", rat(r.q)}, {"x", rat(r.x)}, {"y", rat(r.y)}, {"u", rat(r.u)}};
  j["partial_fractions"] = {{"lhs", rat(r.lhs)}, {"rhs", rat(r.rhs)}, {"holds", r.partial_fractions}};
  j["numerator_identity"] = {{"holds", r.numerator_identity}, {"random_points", r.random_points}, {"seed", r.seed}};
  j["line_regularity"] = r.line_regularity;
  j["series"] = {{"N", r.series.N},
                 {"identity", r.series.identity},
                 {"tail_below_1e-12", r.series.tail_small},
                 {"closed", rat(r.series.closed)},
                 {"numeric_tail", r.series.tail.get_d()}};
  return j;
}

json cmd_local_zeta(const Config& c) {
  auto r = unramified_gl1gl2_identity(parse_rational(c.q), parse_rational(c.x), parse_rational(c.y),
                                      parse_rational(c.u), c.seed);
  json j = gl1gl2_json(r);
  if (!r.partial_fractions || !r.numerator_identity || !r.series.identity || !r.line_regularity)
    throw AssertionFailure("local-zeta-gl1gl2: identity failed\n" + j.dump());
  return j;
}

json cmd_local_support(const Config& c, Inputs& in) {
  auto p = in.pair();
  const auto& reg = in.registry();
  if (c.m != "n" && c.m != "n+1") throw ValidationError("--m must be n or n+1");
  auto rep = support_classification(p, reg, c.m == "n" ? Schedule::N : Schedule::NPlus1);
  json j;
  j["m"] = c.m;
  j["terms"] = json::array();
  for (const auto& t : rep.terms)
    j["terms"].push_back({{"Q", t.Q.str()},
                          {"w_n", weyl(t.w.w_n)},
                          {"w_np1", weyl(t.w.w_np1)},
                          {"survives", t.survives},
                          {"predicted", t.predicted},
                          {"regular_on_intersection", t.regular_on_intersection},
                          {"restriction", t.survives ? t.rest.str() : "0"}});
  j["survivors"] = rep.survivors;
  j["mismatches"] = rep.mismatches;
  j["matches_prediction"] = rep.mismatches == 0;
  auto fw = local_factorization_witness(p, reg);
  j["factorization_witness"] = {{"prefix_ok", fw.prefix_ok}, {"schedules_agree", fw.schedules_agree}};
  if (rep.mismatches) throw AssertionFailure("local-support: classification differs from the prediction\n" + j.dump());
  return j;
}

json cmd_example(const Config& c, Inputs& in) {
  InducingPair p = c.pair_path.empty() ? InducingPair::from_json(json::parse(R"({
      "family1": [], "family2": [{"r": 1, "d": 2, "atom": "1"}],
      "coordinates": ["a", "b", "c"], "pi_coordinates": ["t"]})"))
                                      : in.pair();
  if (p.n() != 1) throw ValidationError("example-gl1gl2 needs a GL1 x GL2 pair");
  const auto& reg = in.registry();
  json j;
  auto s = singular_forms(p);
  for (const auto& f : s.plus) j["L_plus"].push_back(f.display(p.names()));
  for (const auto& f : s.minus) j["L_minus"].push_back(f.display(p.names()));
  auto H = intersection_check(p);
  for (const auto& e : H.equations()) j["intersection"].push_back(e.str(p.names()) + " = 0");
  j["kernel"] = mero(zeta_kernel(p, reg));
  auto rep = global_residue_pipeline(p, reg, c.seed);
  j["order_independence"] = rep.order_independent;
  j["canonical"] = mero(rep.canonical);
  j["matches_cl"] = rep.matches_cl;
  // numeric value over Q at t = 0 and the completed zeta at 2
  Vec at = zeros(rep.canonical.space().ambient());
  j["value_at_t0"] = evaluate_numeric_digits(rep.canonical, at, Evaluators{}, c.digits);
  const double pi = std::acos(-1.0);
  j["xi_2"] = completed_zeta(2.0);
  j["xi_2_error"] = std::abs(completed_zeta(2.0) - pi / 6);
  auto loc = unramified_gl1gl2_identity(2, frac(1, 3), frac(1, 5), frac(1, 7), c.seed);
  j["local_identity"] = gl1gl2_json(loc);
  j["local_identity_ii"] = loc.partial_fractions;
  auto sup = support_classification(p, reg, Schedule::NPlus1);
  j["local_support_matches"] = sup.mismatches == 0;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rankin-Selberg parabolic and residue toolkit"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--seed", cfg.seed, "random seed");
    s->add_option("--out", cfg.out_path, "write the report here instead of stdout");
    s->add_option("--digits", cfg.digits, "decimal digits for numeric fields")->check(CLI::Range(5, 50));
  };
  auto add_pair = [&](CLI::App* s, bool required) {
    auto o = s->add_option("--pair", cfg.pair_path, "pair JSON file");
    if (required) o->required();
    s->add_option("--registry", cfg.registry_path, "atom registry JSON file");
  };

  auto* enumerate = app.add_subcommand("enumerate-rs", "list the RS parabolics of GL_n x GL_{n+1}");
  enumerate->add_option("--n", cfg.n)->required();
  add_common(enumerate);
  for (const char* name : {"pair-validate", "pair-forms", "pair-criterion", "pair-weyl"}) {
    auto* s = app.add_subcommand(name, std::string(name) + " on a pair file");
    add_pair(s, true);
    add_common(s);
  }
  auto* residues = app.add_subcommand("pair-residues", "iterated residues of the global kernel");
  add_pair(residues, true);
  residues->add_option("--order", cfg.order, "first, second or both");
  add_common(residues);
  auto* cones = app.add_subcommand("cones-ft", "Fourier transforms of RS cones");
  cones->add_option("--n", cfg.n)->required();
  add_common(cones);
  auto* part = app.add_subcommand("local-partition", "decompose Lambda[>= M] into cosets");
  part->add_option("--n", cfg.n, "lattice rank")->required();
  part->add_option("--M", cfg.M);
  part->add_option("--side", cfg.side, "box side of the brute-force check");
  part->add_option("--max-threshold", cfg.max_threshold, "thresholds are hashed into [-t, t]");
  add_common(part);
  auto* lz = app.add_subcommand("local-zeta-gl1gl2", "unramified GL1 x GL2 identities");
  lz->add_option("--q", cfg.q);
  lz->add_option("--x", cfg.x);
  lz->add_option("--y", cfg.y);
  lz->add_option("--u", cfg.u);
  add_common(lz);
  auto* sup = app.add_subcommand("local-support", "vanishing of the restricted F^Q terms");
  add_pair(sup, true);
  sup->add_option("--m", cfg.m, "n or n+1");
  add_common(sup);
  auto* ex = app.add_subcommand("example-gl1gl2", "the full GL1 x GL2 reproduction");
  add_pair(ex, false);
  add_common(ex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  json body;
  Inputs in(cfg);
  try {
    const auto& c = cfg.command;
    if (c == "enumerate-rs") body = cmd_enumerate_rs(cfg);
    else if (c == "pair-validate") body = cmd_pair_validate(in);
    else if (c == "pair-forms") body = cmd_pair_forms(in);
    else if (c == "pair-residues") body = cmd_pair_residues(cfg, in);
    else if (c == "pair-criterion") body = cmd_pair_criterion(in);
    else if (c == "pair-weyl") body = cmd_pair_weyl(in);
    else if (c == "cones-ft") body = cmd_cones_ft(cfg);
    else if (c == "local-partition") body = cmd_local_partition(cfg);
    else if (c == "local-zeta-gl1gl2") body = cmd_local_zeta(cfg);
    else if (c == "local-support") body = cmd_local_support(cfg, in);
    else if (c == "example-gl1gl2") body = cmd_example(cfg, in);
  } catch (const ValidationError& e) {
    std::cerr << json{{"command", cfg.command}, {"error", "validation"}, {"message", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const AssertionFailure& e) {
    std::cerr << json{{"command", cfg.command}, {"error", "assertion"}, {"message", e.what()}}.dump(2) << "\n";
    return 3;
  } catch (const json::exception& e) {
    std::cerr << json{{"command", cfg.command}, {"error", "validation"}, {"message", e.what()}}.dump(2) << "\n";
    return 2;
  }

  json report;
  report["command"] = cfg.command;
  report["seed"] = cfg.seed;
  report["input_hash"] = "fnv1a64:" + hex(in.hash());
  report["versions"] = {{"rsp", kVersion}, {"json", "nlohmann " + std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR)}};
  report["report"] = body;
  const std::string text = report.dump(2) + "\n";
  if (cfg.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << cfg.out_path << "\n";
      return 2;
    }
    out << text;
  }
  return 0;
}
