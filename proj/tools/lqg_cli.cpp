// lqg: command-line front end for the LQG landscape library.

#include <CLI11.hpp>

#include "lqg/lqg.hpp"
#include "lqg/io.hpp"

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace lqg;

namespace {

enum Exit { kOk = 0, kReportFail = 1, kValidation = 2, kNumerical = 3, kNoPath = 4 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoPathFound:
      return kNoPath;
    case ErrorKind::InvalidPlant:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonSquare:
    case ErrorKind::NotSISO:
    case ErrorKind::NotProper:
    case ErrorKind::AssumptionViolated:
    case ErrorKind::NotStabilizing:
    case ErrorKind::PlantNotStable:
    case ErrorKind::UnstablePadding:
    case ErrorKind::NonDiagonalizable:
    case ErrorKind::NotStationary:
    case ErrorKind::NonMinimalController:
      return kValidation;
    default:
      return kNumerical;
  }
}

// Where the plant comes from: a PlantFile or a named example.
struct PlantSource {
  std::string file;
  std::string example;
  double eps = 0.5;

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("--plant", file, "PlantFile JSON");
    auto* e = cmd->add_option("--example", example, "named example")
                  ->check(CLI::IsMember(example_names()));
    f->excludes(e);
    cmd->add_option("--eps", eps, "parameter of ex4.5 and ex4.1");
  }

  Plant load() const {
    if (!example.empty()) return example_plant(example, eps);
    if (file.empty()) throw Error(ErrorKind::InvalidArgument, "give --plant or --example");
    return plant_from_json(read_json_file(file));
  }
};

// A controller token is an example key (with --example) or a ControllerFile.
Controller resolve_controller(const PlantSource& src, const std::string& token) {
  if (!src.example.empty()) {
    if (auto K = example_controller(src.example, token, src.eps)) return *K;
  }
  if (std::filesystem::exists(token)) return controller_from_json(read_json_file(token));
  std::string keys;
  for (const auto& k : example_controller_keys(src.example)) keys += " " + k;
  throw Error(ErrorKind::InvalidArgument,
              "'" + token + "' is neither a controller file nor a key of this example" +
                  (keys.empty() ? std::string() : " (keys:" + keys + ")"));
}

Controller controller_or_optimum(const PlantSource& src, const Plant& plant,
                                 const std::string& token) {
  return token.empty() ? riccati_controller(plant).K : resolve_controller(src, token);
}

json minimality_to_json(const MinimalityReport& m) {
  return {{"controllable", m.controllable},
          {"observable", m.observable},
          {"minimal", m.minimal},
          {"sigma_c", m.sigma_c},
          {"sigma_o", m.sigma_o}};
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- example reports

struct Report {
  std::string name;
  json checks = json::array();
  bool pass = true;

  void check(const std::string& what, bool ok, const json& value, const json& expected) {
    checks.push_back({{"check", what}, {"value", value}, {"expected", expected}, {"pass", ok}});
    pass = pass && ok;
  }
  json to_json() const { return {{"example", name}, {"checks", checks}, {"pass", pass}}; }
  void print_table() const {
    for (const json& c : checks) {
      std::cout << (c["pass"].get<bool>() ? "PASS  " : "FAIL  ") << c["check"].get<std::string>()
                << "  value=" << c["value"].dump() << "  expected=" << c["expected"].dump()
                << '\n';
    }
    std::cout << (pass ? "PASS " : "FAIL ") << name << '\n';
  }
};

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }
double maxabs(const Mat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

double controller_error(const Controller& a, const Controller& b) {
  return std::max({maxabs(a.AK - b.AK), maxabs(a.BK - b.BK), maxabs(a.CK - b.CK)});
}

Controller key(const std::string& ex, const std::string& k, double eps = 0.5) {
  return *example_controller(ex, k, eps);
}

void report_disconnected(Report& r, const std::string& ex) {
  const Plant p = example_plant(ex);
  const Controller k1 = key(ex, "k1"), k2 = key(ex, "k2"), mid = key(ex, "mid");
  const bool s1 = is_stabilizing(p, k1).stable, s2 = is_stabilizing(p, k2).stable;
  const bool sm = is_stabilizing(p, mid).stable;
  r.check("k1 stabilizing", s1, s1, true);
  r.check("k2 stabilizing", s2, s2, true);
  r.check("midpoint not stabilizing", !sm, sm, false);
  const bool differ = component_sign(p, k1) != component_sign(p, k2);
  r.check("component signs differ", differ, differ, true);
  bool no_path = false;
  try {
    path_between(p, k2, k1, 200);
  } catch (const Error& e) {
    no_path = e.kind() == ErrorKind::NoPathFound;
  }
  r.check("path_between reports NoPathFound", no_path, no_path, true);
  const bool reduced = reduced_order_search(p, p.n() - 1).has_value();
  r.check("no stabilizer of order n-1", !reduced, reduced, false);
}

Report run_example(const std::string& ex, double eps) {
  Report r{ex};
  if (ex == "ex3.1" || ex == "ex3.2") {
    report_disconnected(r, ex);
    if (ex == "ex3.1") {
      // At A_K = -2 the closed loop [[1, C_K], [B_K, -2]] has trace -1, so it is
      // Hurwitz exactly when its determinant -2 - B_K C_K is positive.
      const Plant p = example_plant(ex);
      int agree = 0, total = 0;
      for (double b = -3; b <= 3.01; b += 0.5) {
        for (double c = -3; c <= 3.01; c += 0.5) {
          const Controller K(Mat::Constant(1, 1, -2), Mat::Constant(1, 1, b), Mat::Constant(1, 1, c));
          const bool ref = -2.0 - b * c > 0.0;
          agree += is_stabilizing(p, K).stable == ref;
          ++total;
        }
      }
      r.check("region B_K C_K < -2 at A_K = -2", agree == total, agree, total);
    }
  } else if (ex == "ex3.3") {
    const Plant p = example_plant(ex);
    const Controller kp = key(ex, "k+"), km = key(ex, "k-");
    const auto bridge = reduced_order_search(p, 0);
    r.check("order-0 stabilizer exists", bridge.has_value(), bridge.has_value(), true);
    const auto path = path_between(p, kp, km, 200, bridge);
    bool all = path.size() == 201;
    for (const Controller& K : path) all = all && is_stabilizing(p, K).stable;
    r.check("path k+ -> k- stays stabilizing", all, static_cast<long>(path.size()), 201);
    r.check("path endpoint", controller_error(path.back(), km) <= 1e-9,
            controller_error(path.back(), km), 0.0);
  } else if (ex == "exB.3") {
    const Plant p = example_plant(ex);
    for (const char* k : {"k1", "k2", "proper"}) {
      const bool ok = is_stabilizing(p, key(ex, k)).stable;
      r.check(std::string(k) + " stabilizing", ok, ok, true);
    }
    SearchConfig cfg;
    cfg.budget = 20000;
    const bool found = reduced_order_search(p, 1, cfg).has_value();
    r.check("no first-order stabilizer found", !found, found, false);
  } else if (ex == "ex4.1") {
    const Plant p = example_plant(ex);
    for (double e : {0.1, 0.5, 1.0}) {
      const double J = lqg_cost(p, key(ex, "k_eps", e)).J;
      const double ref = (1 + 3 * e * e + std::pow(e, 4)) / 2;
      r.check("J(eps=" + std::to_string(e).substr(0, 3) + ")", near(J, ref, 1e-9 * ref), J, ref);
    }
    const double J = lqg_cost(p, key(ex, "k_eps", 1e-4)).J;
    r.check("J(1e-4) approaches 1/2", near(J, 0.5, 1e-7), J, 0.5);
  } else if (ex == "ex4.2") {
    const Plant p = example_plant(ex);
    for (double a : {-1.0, -2.0}) {
      const Controller K(Mat::Constant(1, 1, a), Mat::Zero(1, 1), Mat::Zero(1, 1));
      const std::string tag = "a=" + std::to_string(static_cast<int>(a)) + " ";
      const double gn = lqg_gradient(p, K).norm();
      r.check(tag + "gradient norm", gn <= 1e-9, gn, 0.0);
      Eigen::SelfAdjointEigenSolver<Mat> es(hessian_matrix(p, K));
      const Vec ev = es.eigenvalues();
      const double k = 1.0 / (2.0 * (1.0 - a));
      const bool ok = near(ev(0), -k, 1e-7) && near(ev(1), 0, 1e-7) && near(ev(2), k, 1e-7);
      r.check(tag + "Hessian eigenvalues", ok, json{ev(0), ev(1), ev(2)}, json{-k, 0.0, k});
    }
  } else if (ex == "ex4.3") {
    const Plant p = example_plant(ex);
    double worst = 0.0;
    for (const Complex s : {Complex(0.3, 0), Complex(2, 0), Complex(0, 1), Complex(0.5, 2)}) {
      const Complex g = zero_controller_G(p, s)(0, 0);
      const Complex ref = 5.0 * (s - 1.0) / (36.0 * (s + 1.0) * (s + 2.0));
      worst = std::max(worst, std::abs(g - ref) / std::abs(ref));
    }
    r.check("G(s) = 5(s-1)/(36(s+1)(s+2))", worst <= 1e-8, worst, 0.0);
    const SaddleReport rep = classify_zero_controller_saddle(p, -Mat::Identity(2, 2));
    r.check("classification", rep.classification == SaddleClass::ZeroHessian,
            to_string(rep.classification), "ZeroHessian");
    const Controller K = key(ex, "kstar");
    Mat dA(2, 2), dB(2, 1), dC(1, 2);
    dA << 1, 3, 0, 0;
    dB << -1, 3;
    dC << 2, 0.5;
    const Direction d(dA, dB, dC);
    const double hq = hessian_quadratic_form(p, K, d);
    r.check("Hessian form along D", std::abs(hq) <= 1e-7, hq, 0.0);
    const double dJ = lqg_cost(p, step(K, d, 0.1)).J - lqg_cost(p, K).J;
    r.check("|J(K + 0.1 D) - J(K)| > 1e-4", std::abs(dJ) > 1e-4, dJ, "> 1e-4");
  } else if (ex == "ex4.4") {
    const Plant p = example_plant(ex);
    const RiccatiSynthesis syn = riccati_controller(p);
    Mat P(2, 2), S(2, 2);
    P << 1, 0, 0, 4;
    S << 2, 0, 0, 2;
    r.check("P = diag(1, 4)", maxabs(syn.P - P) <= 1e-8, matrix_to_json(syn.P), matrix_to_json(P));
    r.check("S = diag(2, 2)", maxabs(syn.S - S) <= 1e-8, matrix_to_json(syn.S), matrix_to_json(S));
    const double err = controller_error(syn.K, key(ex, "k1"));
    r.check("controller", err <= 1e-8, err, 0.0);
    const MinimalityReport mr = controller_minimality(syn.K);
    r.check("(C_K, A_K) unobservable", !mr.observable, mr.observable, false);
    const StationaryReport rep = analyze_stationary(p, syn.K);
    r.check("verdict", rep.verdict == StationaryVerdict::NonMinimalStationary,
            to_string(rep.verdict), "NonMinimalStationary");
    for (const char* g : {"gd1", "gd2"}) {
      const Complex s(0.7, 0.4);
      const Complex a = transfer_eval(key(ex, g), s)(0, 0);
      const Complex b = transfer_eval(syn.K, s)(0, 0);
      r.check(std::string(g) + " transfer function matches optimum", std::abs(a - b) <= 1e-3,
              std::abs(a - b), 0.0);
    }
  } else if (ex == "ex4.5") {
    const Plant p = example_plant(ex, eps);
    const Controller K = riccati_controller(p).K;
    const RestrictedSpectrum rs = restricted_rcond(p, K);
    const double bound = 147.0 / 680000.0 * std::pow(eps, 4);
    r.check("restricted rcond of order eps^4", rs.rcond <= 2.0 * bound, rs.rcond, bound);
    Mat dB(2, 1), dC(1, 2);
    dB << 0.5, 0.5;
    dC << -0.5, -0.5;
    const double h1 = hessian_quadratic_form(p, K, Direction(Mat::Zero(2, 2), dB, dC));
    r.check("Hess(D1) near 680/343", near(h1, 680.0 / 343.0, 0.1 * 680.0 / 343.0), h1,
            680.0 / 343.0);
  } else if (ex == "doyle") {
    const Plant p = example_plant(ex);
    const RiccatiSynthesis syn = riccati_controller(p);
    const double err = controller_error(syn.K, key(ex, "opt"));
    r.check("controller", err <= 1e-8, err, 0.0);
    r.check("J = 750", near(syn.J, 750.0, 1e-6), syn.J, 750.0);
    const CanonicalForm cf = canonical_form(syn.K);
    r.check("canonical b", maxabs(cf.b - Vec::Map(std::array<double, 2>{26, 8}.data(), 2)) <= 1e-8,
            json{cf.b(0), cf.b(1)}, json{26, 8});
    r.check("canonical a", maxabs(cf.a - Vec::Map(std::array<double, 2>{25, -50}.data(), 2)) <= 1e-8,
            json{cf.a(0), cf.a(1)}, json{25, -50});
    const StationaryReport rep = analyze_stationary(p, syn.K);
    r.check("verdict", rep.verdict == StationaryVerdict::GlobalOptimum, to_string(rep.verdict),
            "GlobalOptimum");
  } else if (ex == "exD.1") {
    const Plant p = example_plant(ex);
    report_disconnected(r, ex);
    r.check("plant is discrete", p.dom() == TimeDomain::Discrete, to_string(p.dom()), "discrete");
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown example '" + ex + "'");
  }
  return r;
}

// ---------------------------------------------------------------- descend

struct DescendOptions {
  std::string init = "pole";
  std::string param = "full";
  std::uint64_t seed = 0;
  double delta = 0.1;
  std::string out;
  int sweep = 0;
  OptimizerConfig cfg;
};

std::string seeded_path(const std::string& out, std::uint64_t seed) {
  std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + "_seed" + std::to_string(seed) +
                             p.extension().string()))
      .string();
}

json run_descend(const Plant& plant, const DescendOptions& o, std::uint64_t seed,
                 const std::string& out) {
  Rng rng(seed);
  const Controller K0 = o.init == "pole"
                            ? init_pole_placement(plant, default_pole_interval(plant.dom()), rng)
                            : init_near_optimal(plant, o.delta, rng);
  OptimizerConfig cfg = o.cfg;
  cfg.seed = seed;
  cfg.parameterization = o.param == "canonical" ? Parameterization::Canonical
                                                : Parameterization::Full;
  const Trace tr = descend(plant, K0, cfg);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + out);
    write_trace_csv(f, tr);
  }
  const LimitCertificate cert = certify_limit(plant, tr.final_controller, 1e-4);
  return {{"seed", seed},
          {"terminal", to_string(tr.terminal)},
          {"iterations", tr.records.back().iter},
          {"J0", tr.records.front().J},
          {"J", tr.records.back().J},
          {"grad_norm", tr.records.back().grad_norm},
          {"initial_controller", controller_to_json(K0)},
          {"final_controller", controller_to_json(tr.final_controller)},
          {"certificate",
           {{"verdict", to_string(cert.verdict)},
            {"stationary", to_string(cert.stationary)},
            {"minimal", cert.minimality.minimal}}},
          {"trace_csv", out}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LQG optimization landscape toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  bool table = false;
  app.add_flag("--table", table, "human-readable output where supported");

  // synthesize
  PlantSource syn_src;
  auto* syn = app.add_subcommand("synthesize", "Riccati-optimal controller and cost");
  syn_src.attach(syn);

  // stationary
  PlantSource st_src;
  std::string st_ctrl;
  double st_tol = -1.0;
  auto* st = app.add_subcommand("stationary", "stationarity and global-optimality analysis");
  st_src.attach(st);
  st->add_option("--controller", st_ctrl, "ControllerFile or example key (default: optimum)");
  st->add_option("--tol", st_tol, "gradient tolerance (default 1e-6 (1 + J))");

  // grad-check
  PlantSource gc_src;
  std::string gc_ctrl;
  double gc_h = 1e-6;
  auto* gc = app.add_subcommand("grad-check", "analytic gradient against central differences");
  gc_src.attach(gc);
  gc->add_option("--controller", gc_ctrl, "ControllerFile or example key (default: optimum)");
  gc->add_option("--step", gc_h, "difference step")->check(CLI::PositiveNumber);

  // hessian
  PlantSource hs_src;
  std::string hs_ctrl;
  bool hs_restricted = false;
  auto* hs = app.add_subcommand("hessian", "Hessian matrix and spectrum");
  hs_src.attach(hs);
  hs->add_option("--controller", hs_ctrl, "ControllerFile or example key (default: optimum)");
  hs->add_flag("--restricted", hs_restricted, "spectrum on the orbit complement at an optimum");

  // path
  PlantSource pa_src;
  std::string pa_k0, pa_k1;
  int pa_steps = 200;
  auto* pa = app.add_subcommand("path", "stabilizing path between two controllers");
  pa_src.attach(pa);
  pa->add_option("k0", pa_k0, "start: ControllerFile or example key")->required();
  pa->add_option("k1", pa_k1, "end: ControllerFile or example key")->required();
  pa->add_option("--steps", pa_steps, "number of segments")->check(CLI::PositiveNumber);

  // descend
  PlantSource de_src;
  DescendOptions de;
  auto* dsc = app.add_subcommand("descend", "gradient descent with Armijo backtracking");
  de_src.attach(dsc);
  dsc->add_option("--init", de.init, "initialization")->check(CLI::IsMember({"pole", "near-optimal"}));
  dsc->add_option("--delta", de.delta, "perturbation size for near-optimal init");
  dsc->add_option("--param", de.param, "parameterization")->check(CLI::IsMember({"full", "canonical"}));
  dsc->add_option("--seed", de.seed, "random seed");
  dsc->add_option("--out", de.out, "trace CSV path");
  dsc->add_option("--max-iters", de.cfg.max_iters, "iteration cap");
  dsc->add_option("--grad-tol", de.cfg.grad_tol, "gradient-norm tolerance");
  dsc->add_option("--alpha", de.cfg.alpha, "Armijo constant");
  dsc->add_option("--beta", de.cfg.beta, "backtracking factor");
  dsc->add_option("--sweep", de.sweep, "run seeds seed .. seed+N-1 concurrently")
      ->check(CLI::NonNegativeNumber);

  // example
  std::string ex_name;
  double ex_eps = 0.5;
  auto* exm = app.add_subcommand("example", "run a named example and report PASS/FAIL");
  exm->add_option("name", ex_name, "example identifier")
      ->required()
      ->check(CLI::IsMember(example_names()));
  exm->add_option("--eps", ex_eps, "parameter of ex4.5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*syn) {
      const Plant plant = syn_src.load();
      const RiccatiSynthesis rs = riccati_controller(plant);
      const MinimalityReport mr = controller_minimality(rs.K);
      json warnings = json::array();
      if (!mr.minimal) warnings.push_back("non-minimal optimum");
      emit({{"controller", controller_to_json(rs.K)},
            {"J", rs.J},
            {"P", matrix_to_json(rs.P)},
            {"S", matrix_to_json(rs.S)},
            {"minimality", minimality_to_json(mr)},
            {"warnings", warnings}});
      if (!mr.minimal) std::cerr << "warning: non-minimal optimum\n";
    } else if (*st) {
      const Plant plant = st_src.load();
      const Controller K = controller_or_optimum(st_src, plant, st_ctrl);
      const StationaryReport rep = analyze_stationary(plant, K, st_tol);
      json j = {{"J", rep.J},
                {"grad_norm", rep.grad_norm},
                {"minimality", minimality_to_json(rep.minimality)},
                {"verdict", to_string(rep.verdict)}};
      if (rep.recovered) {
        j["recovered"] = {{"T", matrix_to_json(rep.recovered->T)},
                          {"P", matrix_to_json(rep.recovered->P)},
                          {"S", matrix_to_json(rep.recovered->S)},
                          {"rP", rep.recovered->rP},
                          {"rS", rep.recovered->rS},
                          {"gains_stabilizing", rep.recovered->gains_stabilizing}};
      }
      emit(j);
    } else if (*gc) {
      const Plant plant = gc_src.load();
      const Controller K = controller_or_optimum(gc_src, plant, gc_ctrl);
      const Vec g = lqg_gradient(plant, K).as_direction().to_vector();
      Vec fd(g.size());
      const Eigen::Index dim = g.size();
      for (Eigen::Index i = 0; i < dim; ++i) {
        const Direction e = Direction::from_vector(Vec::Unit(dim, i), K.q(), K.m(), K.p());
        fd(i) = (lqg_cost(plant, step(K, e, gc_h)).J - lqg_cost(plant, step(K, e, -gc_h)).J) /
                (2 * gc_h);
      }
      const double err = (g - fd).norm() / std::max(1.0, fd.norm());
      emit({{"gradient", std::vector<double>(g.data(), g.data() + dim)},
            {"finite_difference", std::vector<double>(fd.data(), fd.data() + dim)},
            {"relative_error", err},
            {"h", gc_h}});
    } else if (*hs) {
      const Plant plant = hs_src.load();
      const Controller K = controller_or_optimum(hs_src, plant, hs_ctrl);
      if (hs_restricted) {
        const RestrictedSpectrum rs = restricted_rcond(plant, K);
        emit({{"min_eig", rs.min_eig}, {"max_eig", rs.max_eig}, {"rcond", rs.rcond}});
      } else {
        const Mat H = hessian_matrix(plant, K);
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        const Vec ev = es.eigenvalues();
        emit({{"layout", "[vec(dC); vec(dB); vec(dA)]"},
              {"hessian", matrix_to_json(H)},
              {"eigenvalues", std::vector<double>(ev.data(), ev.data() + ev.size())}});
      }
    } else if (*pa) {
      const Plant plant = pa_src.load();
      const Controller K0 = resolve_controller(pa_src, pa_k0);
      const Controller K1 = resolve_controller(pa_src, pa_k1);
      std::vector<Controller> path;
      bool bridged = false;
      try {
        path = path_between(plant, K0, K1, pa_steps);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoPathFound) throw;
        // Opposite lifted components: look for an order n-1 stabilizer to bridge them.
        const auto red = reduced_order_search(plant, plant.n() - 1);
        if (!red) {
          throw Error(ErrorKind::NoPathFound,
                      std::string(e.what()) + "; no stabilizer of order n-1 was found");
        }
        path = path_between(plant, K0, K1, pa_steps, red);
        bridged = true;
      }
      json ctrls = json::array();
      for (const Controller& K : path) ctrls.push_back(controller_to_json(K));
      emit({{"bridged", bridged}, {"samples", ctrls.size()}, {"controllers", ctrls}});
    } else if (*dsc) {
      const Plant plant = de_src.load();
      de.cfg.validate();
      if (de.sweep == 0) {
        emit(run_descend(plant, de, de.seed, de.out));
      } else {
        std::vector<json> results(static_cast<std::size_t>(de.sweep));
        std::vector<std::string> errors(results.size());
        std::vector<std::thread> pool;
        for (int i = 0; i < de.sweep; ++i) {
          pool.emplace_back([&, i] {
            const std::uint64_t s = de.seed + static_cast<std::uint64_t>(i);
            try {
              results[i] = run_descend(plant, de, s, de.out.empty() ? "" : seeded_path(de.out, s));
            } catch (const Error& e) {
              results[i] = {{"seed", s}, {"error", to_string(e.kind())}, {"message", e.what()}};
            }
          });
        }
        for (auto& t : pool) t.join();
        emit(json(results));
      }
    } else if (*exm) {
      const Report r = run_example(ex_name, ex_eps);
      if (table) {
        r.print_table();
      } else {
        emit(r.to_json());
      }
      return r.pass ? kOk : kReportFail;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return kOk;
}
