// Command-line front end: gaussep <command> [file] [flags]. Reads stdin when
// no file is given. Exit codes: 0 separable/valid/PPT, 1 entangled/invalid/
// non-PPT, 2 inconclusive, 64 usage, 65 bad input data, 66 unreadable input.

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gaussep/io.hpp"
#include "gaussep/matrix_analysis.hpp"
#include "gaussep/passive.hpp"
#include "gaussep/separability.hpp"
#include "gaussep/structure.hpp"
#include "gaussep/symplectic.hpp"

using namespace gaussep;
using Eigen::MatrixXd;
using nlohmann::json;

namespace {

constexpr int kUsage = 64, kData = 65, kNoInput = 66;

struct Options {
  double tol_psd = Tolerances{}.psd;
  double tol_verdict = Tolerances{}.verdict;
  std::optional<double> epsilon;
  int max_iter = SolverConfig{}.max_iterations;
  bool json = false;
  std::uint64_t seed = 1;
  int trials = 50;
  std::string input = "-";
  std::string output = "-";
  std::string cert;
  std::string engine = "auto";
  std::string groups;
};

Tolerances tolerances(const Options& o) {
  Tolerances t;
  t.psd = o.tol_psd;
  t.verdict = o.tol_verdict;
  return t;
}

SolverConfig solver(const Options& o) {
  SolverConfig c;
  c.tol = tolerances(o);
  c.max_iterations = o.max_iter;
  c.epsilon = o.epsilon;
  return c;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

json matrix_rows(const MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Index k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
    rows.push_back(r);
  }
  return rows;
}

QCMFile read_input(const Options& o) {
  QCMFile f = parse_qcm(read_text(o.input));
  for (const auto& w : f.warnings) std::cerr << "warning: " << w << "\n";
  return f;
}

// Prints `report` as JSON or as aligned key/value lines.
void emit(const Options& o, const json& report) {
  if (o.json) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : report.items()) {
    std::cout << std::left << std::setw(30) << k << " ";
    if (v.is_number_float())
      std::cout << fmt(v.get<double>());
    else if (v.is_string())
      std::cout << v.get<std::string>();
    else
      std::cout << v.dump();
    std::cout << "\n";
  }
}

int verdict_code(Verdict v) {
  switch (v) {
    case Verdict::Separable: return 0;
    case Verdict::Entangled: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

json cert_summary(const SeparabilityCert& c, const CertCheck& chk) {
  json r = {{"verdict", to_string(c.verdict)},
            {"route", to_string(c.route)},
            {"margin", std::isfinite(c.margin) ? json(c.margin) : json(nullptr)},
            {"certificate_valid", chk.ok}};
  if (std::isfinite(c.min_pt_symplectic_eigenvalue))
    r["min_pt_symplectic_eigenvalue"] = c.min_pt_symplectic_eigenvalue;
  if (c.verdict == Verdict::Separable)
    r["min_eig_v_minus_gammas"] = chk.min_eigenvalue;
  if (c.route == Route::Dual) r["dual_bound"] = c.dual_bound;
  if (c.epsilon > 0) r["epsilon"] = c.epsilon;
  if (c.iterations > 0) r["iterations"] = c.iterations;
  if (!c.notes.empty()) r["notes"] = c.notes;
  return r;
}

std::optional<Route> engine_route(const std::string& e) {
  if (e == "auto") return std::nullopt;
  if (e == "1vn") return Route::Interval;
  try {
    return route_from_string(e);
  } catch (const DomainError&) {
    throw CLI::ValidationError("--engine", "unknown engine '" + e + "'");
  }
}

// Per-mode group labels, e.g. "a,b,b" → {{0}, {1, 2}}.
std::vector<std::vector<int>> parse_groups(const std::string& spec, int modes) {
  std::vector<std::string> labels;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) labels.push_back(item);
  if (int(labels.size()) != modes)
    throw CLI::ValidationError("--groups", "expected " + std::to_string(modes) +
                                               " labels, got " +
                                               std::to_string(labels.size()));
  std::vector<std::string> order;
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < modes; ++i) {
    auto it = std::find(order.begin(), order.end(), labels[i]);
    if (it == order.end()) {
      order.push_back(labels[i]);
      groups.emplace_back();
      it = order.end() - 1;
    }
    groups[size_t(it - order.begin())].push_back(i);
  }
  return groups;
}

int cmd_check(const Options& o) {
  const QCMFile f = read_input(o);
  const QcmCheck c = is_qcm(f.matrix, f.layout, tolerances(o));
  emit(o, {{"valid", c.valid},
           {"min_eig_v_plus_i_omega", c.min_eigenvalue},
           {"m", f.layout.m},
           {"n", f.layout.n}});
  return c.valid ? 0 : 1;
}

int cmd_ppt(const Options& o) {
  const QCM v = read_input(o).qcm();
  const PptResult r = is_ppt(v, tolerances(o));
  emit(o, {{"ppt", r.ppt},
           {"min_pt_symplectic_eigenvalue", r.min_symplectic_eigenvalue},
           {"distillable", r.distillable}});
  return r.ppt ? 0 : 1;
}

int finish_sep(const Options& o, const QCMFile& f, const SeparabilityCert& c) {
  const Tolerances tol = tolerances(o);
  const CertCheck chk = validate_certificate(f.qcm(), c, tol);
  json r = cert_summary(c, chk);
  if (!o.cert.empty()) {
    save_cert(o.cert, make_cert_file(f, c, tol));
    r["certificate_file"] = o.cert;
  }
  emit(o, r);
  if (!chk.ok) {
    std::cerr << "error: certificate failed re-validation: " << chk.reason << "\n";
    return 2;
  }
  return verdict_code(c.verdict);
}

int cmd_sep(const Options& o) {
  const QCMFile f = read_input(o);
  const QCM v = f.qcm();
  return finish_sep(o, f, auto_separability(v, solver(o), engine_route(o.engine)));
}

int cmd_fullsep(const Options& o) {
  const QCMFile f = read_input(o);
  const QCM v = f.qcm();
  const auto groups = parse_groups(o.groups, v.layout().modes());
  return finish_sep(o, f, full_separability(v, groups, solver(o)));
}

int cmd_abs(const Options& o) {
  const QCMFile f = read_input(o);
  const Tolerances tol = tolerances(o);
  const AbsSepCert c = absolute_separability(f.qcm(), tol);
  json r = {{"verdict", to_string(c.verdict)},
            {"lambda1", c.lambda1},
            {"lambda2", c.lambda2},
            {"lambda_product", c.lambda1 * c.lambda2}};
  if (c.has_witness) {
    r["k_branch"] = c.k_branch;
    r["k"] = c.k;
    r["witness_min_eigenvalue"] = c.witness_min_eigenvalue;
    r["certificate_valid"] = validate_abs_cert(f.qcm(), c, tol);
  }
  if (!o.cert.empty()) {
    save_cert(o.cert, make_cert_file(f, c, tol));
    r["certificate_file"] = o.cert;
  }
  emit(o, r);
  return c.verdict == AbsVerdict::AbsolutelySeparable ? 0 : 1;
}

int cmd_orbit(const Options& o) {
  const QCM v = read_input(o).qcm();
  const OrbitReport r = passive_orbit_check(v, o.trials, o.seed, tolerances(o));
  const bool consistent = r.ppt_violations == 0 && r.cert_failures == 0 &&
                          r.verdict_changes == 0;
  emit(o, {{"verdict", to_string(r.verdict)},
           {"trials", r.trials},
           {"seed", o.seed},
           {"consistent", consistent},
           {"ppt_violations", r.ppt_violations},
           {"cert_failures", r.cert_failures},
           {"verdict_changes", r.verdict_changes},
           {"max_lambda_product_drift", r.max_lambda_product_drift},
           {"min_pt_symplectic_eigenvalue", r.min_pt_symplectic_eigenvalue},
           {"entangling_trial", r.entangling_trial}});
  return consistent ? 0 : 1;
}

int cmd_localize(const Options& o) {
  const QCM v = read_input(o).qcm();
  QCM w = v;
  MonoSymmetricBlocks b = detect_mono_symmetry(v, tolerances(o).alg);
  bool swapped = false;
  if (!b.detected && v.n() >= 2) {
    w = swap_parties(v);
    b = detect_mono_symmetry(w, tolerances(o).alg);
    swapped = b.detected;
  }
  json r = {{"detected", b.detected}, {"deviation", b.deviation}};
  if (!b.detected) {
    emit(o, r);
    return 1;
  }
  const LocalizationResult l = localize(w, b);
  json spect = json::array();
  for (const auto& s : l.spectators) spect.push_back(matrix_rows(s));
  r["localized_party"] = swapped ? "B" : "A";
  r["residual"] = l.residual;
  r["alpha"] = matrix_rows(b.alpha);
  r["eps"] = matrix_rows(b.eps);
  r["householder"] = matrix_rows(l.o);
  r["spectators"] = spect;
  r["reduced"] = qcm_to_json(make_qcm_file(*l.reduced, "localize"));
  emit(o, r);
  return 0;
}

MatrixXd read_matrix(const std::string& path) {
  const json j = parse_document(read_text(path));
  if (j.is_array()) {
    const Index r = Index(j.size());
    MatrixXd m(r, r);
    for (Index i = 0; i < r; ++i) {
      if (!j[size_t(i)].is_array() || Index(j[size_t(i)].size()) != r)
        throw FormatError("matrix in '" + path + "' is not square");
      for (Index k = 0; k < r; ++k) m(i, k) = j[size_t(i)][size_t(k)].get<double>();
    }
    return m;
  }
  return qcm_from_json(j).matrix;
}

int cmd_means(const Options& o, const std::string& a_path, const std::string& b_path,
              int split) {
  const Tolerances tol = tolerances(o);
  const MatrixXd a = read_matrix(a_path);
  json r;
  if (split > 0) {
    r["schur_complement"] = matrix_rows(schur_complement(symmetrize(a), BlockPartition{split}, 0.0, tol));
    emit(o, r);
    return 0;
  }
  if (b_path.empty()) throw CLI::ValidationError("means", "needs two matrices or --schur");
  const MatrixXd b = read_matrix(b_path);
  if (a.rows() != b.rows()) throw FormatError("means: matrices differ in size");
  r["arithmetic"] = matrix_rows(arithmetic_mean(a, b));
  r["geometric"] = matrix_rows(geometric_mean(a, b, tol));
  r["harmonic"] = matrix_rows(harmonic_mean(a, b, tol));
  r["identity_residual"] = mean_identity_residual(a, b, tol);
  emit(o, r);
  return 0;
}

int cmd_verify(const Options& o, const std::string& path) {
  const CertFile f = load_cert(path);
  const Reverification v = reverify(f);
  json r = {{"valid", v.ok},
            {"digest_ok", v.digest_ok},
            {"kind", f.kind == CertFile::Kind::Separability ? "separability"
                                                            : "absolute-separability"},
            {"verdict", f.kind == CertFile::Kind::Separability
                            ? to_string(f.sep.verdict)
                            : to_string(f.abs.verdict)}};
  if (!v.reason.empty()) r["reason"] = v.reason;
  emit(o, r);
  return v.ok ? 0 : 1;
}

int cmd_gen(const Options& o, const std::vector<std::string>& args, bool pure,
            double nu_max, double squeeze_max) {
  if (args.empty()) throw CLI::ValidationError("gen", "expected tmsv, thermal or random");
  auto arg = [&](size_t i, const char* what) {
    if (i >= args.size())
      throw CLI::ValidationError("gen", std::string("missing argument ") + what);
    try {
      size_t used = 0;
      const double x = std::stod(args[i], &used);
      if (used != args[i].size()) throw std::invalid_argument(args[i]);
      return x;
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("gen", "'" + args[i] + "' is not a number");
    }
  };
  const std::string& kind = args[0];
  QCMFile f;
  if (kind == "tmsv") {
    const double r = arg(1, "r");
    f = make_qcm_file(tmsv(r), "tmsv " + args[1]);
  } else if (kind == "thermal") {
    const double nu = arg(1, "nu");
    const int m = args.size() > 2 ? int(arg(2, "m")) : 1;
    const int n = args.size() > 3 ? int(arg(3, "n")) : m;
    f = make_qcm_file(thermal(nu, m, n), "thermal");
  } else if (kind == "random") {
    const int m = int(arg(1, "m")), n = int(arg(2, "n"));
    const Purity p = pure ? Purity::Pure() : Purity::Mixed(nu_max);
    f = make_qcm_file(random_qcm(o.seed, ModeLayout{m, n}, p, squeeze_max), "random", o.seed);
  } else if (kind == "mono") {
    const int m = int(arg(1, "m")), n = int(arg(2, "n"));
    const Purity p = pure ? Purity::Pure() : Purity::Mixed(nu_max);
    const QCM r = random_qcm(o.seed, ModeLayout{m, n}, p, squeeze_max);
    f = make_qcm_file(symmetrize_party_a(r), "mono", o.seed);
  } else {
    throw CLI::ValidationError("gen", "unknown generator '" + kind + "'");
  }
  write_text(o.output, dump_document(qcm_to_json(f)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-state separability toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--tol-psd", o.tol_psd, "relative PSD tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--tol-verdict", o.tol_verdict, "verdict band")->check(CLI::NonNegativeNumber);
  app.add_option("--epsilon", o.epsilon, "upper-bound regularisation, relative to ||V||")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-iter", o.max_iter, "solver iterations per level")->check(CLI::PositiveNumber);
  app.add_flag("--json", o.json, "machine-readable output");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--trials", o.trials, "number of random trials")->check(CLI::PositiveNumber);

  auto input_cmd = [&](const char* name, const char* help) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("file", o.input, "QCM file (default: stdin)");
    return c;
  };
  CLI::App* check = input_cmd("check", "Heisenberg test V + iΩ ≥ 0");
  CLI::App* ppt = input_cmd("ppt", "PPT test across the A|B cut");
  CLI::App* sep = input_cmd("sep", "decide separability (auto-routed)");
  sep->add_option("--engine", o.engine,
                  "auto, general, interval (1vn), pt-invariant, mono-symmetric, isotropic");
  sep->add_option("--cert", o.cert, "write the certificate here");
  CLI::App* fullsep = input_cmd("fullsep", "full separability across mode groups");
  fullsep->add_option("--groups", o.groups, "one group label per mode, e.g. a,b,b")->required();
  fullsep->add_option("--cert", o.cert, "write the certificate here");
  CLI::App* abs = input_cmd("abs-sep", "absolute separability (λ₁λ₂ ≥ 1)");
  abs->add_option("--cert", o.cert, "write the certificate here");
  CLI::App* orbit = input_cmd("orbit", "absolute-separability verdict over random passive congruences");
  CLI::App* loc = input_cmd("localize", "localize a mono-symmetric state");

  CLI::App* gen = app.add_subcommand("gen", "write a QCM file: tmsv R | thermal NU [M [N]] | random M N | mono M N");
  std::vector<std::string> gen_args;
  bool pure = false;
  double nu_max = 3.0, squeeze_max = 1.0;
  gen->add_option("args", gen_args)->required();
  gen->add_option("-o,--output", o.output, "output file (default: stdout)");
  gen->add_flag("--pure", pure, "random: pure state");
  gen->add_option("--nu-max", nu_max, "random: largest symplectic eigenvalue")->check(CLI::Range(1.0, 1e6));
  gen->add_option("--squeeze-max", squeeze_max, "random: largest squeezing")->check(CLI::NonNegativeNumber);

  CLI::App* means = app.add_subcommand("means", "matrix means A#B, A!B, (A+B)/2, or a Schur complement");
  std::string a_path, b_path;
  int split = 0;
  means->add_option("a", a_path, "first matrix (nested JSON array or QCM file)")->required();
  means->add_option("b", b_path, "second matrix");
  means->add_option("--schur", split, "Schur complement of A with this leading block size");

  CLI::App* verify = app.add_subcommand("verify", "re-validate a certificate file");
  std::string cert_path;
  verify->add_option("cert", cert_path, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(o);
    if (*ppt) return cmd_ppt(o);
    if (*sep) return cmd_sep(o);
    if (*fullsep) return cmd_fullsep(o);
    if (*abs) return cmd_abs(o);
    if (*orbit) return cmd_orbit(o);
    if (*loc) return cmd_localize(o);
    if (*gen) return cmd_gen(o, gen_args, pure, nu_max, squeeze_max);
    if (*means) return cmd_means(o, a_path, b_path, split);
    if (*verify) return cmd_verify(o, cert_path);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kData;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kData;
  } catch (const ConditioningError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kData;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoInput;
  }
  return kUsage;
}
