#include "gaussep/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>

namespace gaussep {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kKindQcm = "qcm";
const char* kKindSep = "separability-certificate";
const char* kKindAbs = "absolute-separability-certificate";

// NaN and ±∞ are written as null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double get_num(const json& j, const char* key, double fallback = kNaN) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  if (!j.at(key).is_number())
    throw FormatError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

template <typename T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

void check_version(const json& j, const char* kind) {
  if (!j.is_object()) throw FormatError("document must be a JSON object");
  const int v = get<int>(j, "schema_version");
  if (v != kSchemaVersion)
    throw FormatError("unsupported schema_version " + std::to_string(v) +
                      " (this build reads version " +
                      std::to_string(kSchemaVersion) + ")");
  if (j.contains("kind") && get<std::string>(j, "kind") != kind)
    throw FormatError("expected a '" + std::string(kind) + "' document, got '" +
                      get<std::string>(j, "kind") + "'");
}

json matrix_json(const MatrixXd& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) data.push_back(m(i, k));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

MatrixXd flat_matrix(const json& data, Index rows, Index cols, const char* what) {
  if (!data.is_array()) throw FormatError(std::string(what) + " must be an array");
  if (Index(data.size()) != rows * cols)
    throw FormatError(std::string(what) + " has " + std::to_string(data.size()) +
                      " entries, expected " + std::to_string(rows * cols));
  MatrixXd m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) {
      const json& e = data[size_t(i * cols + k)];
      if (!e.is_number()) throw FormatError(std::string(what) + " holds a non-number");
      m(i, k) = e.get<double>();
    }
  if (!m.allFinite()) throw FormatError(std::string(what) + " holds non-finite values");
  return m;
}

MatrixXd matrix_from(const json& j, const char* what) {
  if (!j.is_object()) throw FormatError(std::string(what) + " must be an object");
  const Index r = get<Index>(j, "rows"), c = get<Index>(j, "cols");
  if (r < 0 || c < 0) throw FormatError(std::string(what) + " has negative size");
  return flat_matrix(j.at("data"), r, c, what);
}

json vector_json(const VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

VectorXd vector_from(const json& j, const char* what) {
  return flat_matrix(j, Index(j.size()), 1, what);
}

json pair_json(const ComplexPair<double>& c) {
  return {{"re", matrix_json(c.re)}, {"im", matrix_json(c.im)}};
}

ComplexPair<double> pair_from(const json& j, const char* what) {
  return {matrix_from(j.at("re"), what), matrix_from(j.at("im"), what)};
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

json sep_json(const SeparabilityCert& c) {
  json gammas = json::array();
  for (const auto& g : c.gammas) gammas.push_back(matrix_json(g));
  json out = {{"verdict", to_string(c.verdict)},
              {"route", to_string(c.route)},
              {"groups", c.groups},
              {"gammas", gammas},
              {"witness_cut", c.witness_cut},
              {"min_pt_symplectic_eigenvalue", num(c.min_pt_symplectic_eigenvalue)},
              {"distillable", c.distillable},
              {"margin", num(c.margin)},
              {"epsilon", c.epsilon},
              {"fixed_group", c.fixed_group},
              {"iterations", c.iterations},
              {"notes", c.notes}};
  if (c.route == Route::Dual)
    out["dual"] = {{"y", pair_json(c.dual_y)},
                   {"z", pair_json(c.dual_z)},
                   {"bound", num(c.dual_bound)}};
  else
    out["dual"] = nullptr;
  return out;
}

SeparabilityCert sep_from(const json& j) {
  SeparabilityCert c;
  try {
    c.verdict = verdict_from_string(get<std::string>(j, "verdict"));
    c.route = route_from_string(get<std::string>(j, "route"));
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  c.groups = get<std::vector<std::vector<int>>>(j, "groups");
  for (const auto& g : get<json>(j, "gammas")) c.gammas.push_back(matrix_from(g, "gamma"));
  c.witness_cut = get<std::vector<int>>(j, "witness_cut");
  c.min_pt_symplectic_eigenvalue = get_num(j, "min_pt_symplectic_eigenvalue");
  c.distillable = get<bool>(j, "distillable");
  c.margin = get_num(j, "margin");
  c.epsilon = get_num(j, "epsilon", 0.0);
  c.fixed_group = get<int>(j, "fixed_group");
  c.iterations = get<int>(j, "iterations");
  c.notes = get<std::vector<std::string>>(j, "notes");
  if (j.contains("dual") && !j.at("dual").is_null()) {
    const json& d = j.at("dual");
    c.dual_y = pair_from(d.at("y"), "dual Y");
    c.dual_z = pair_from(d.at("z"), "dual Z");
    c.dual_bound = get_num(d, "bound");
  }
  return c;
}

json abs_json(const AbsSepCert& c) {
  return {{"verdict", to_string(c.verdict)},
          {"lambda1", c.lambda1},
          {"lambda2", c.lambda2},
          {"has_witness", c.has_witness},
          {"k_branch", c.k_branch},
          {"k", c.k},
          {"p", c.p},
          {"x", vector_json(c.x)},
          {"y", vector_json(c.y)},
          {"z", vector_json(c.z)},
          {"gamma_a", matrix_json(c.gamma_a)},
          {"gamma_b", matrix_json(c.gamma_b)},
          {"identity_residual", num(c.identity_residual)},
          {"witness_min_eigenvalue", num(c.witness_min_eigenvalue)}};
}

AbsSepCert abs_from(const json& j) {
  AbsSepCert c;
  const std::string v = get<std::string>(j, "verdict");
  if (v == to_string(AbsVerdict::AbsolutelySeparable))
    c.verdict = AbsVerdict::AbsolutelySeparable;
  else if (v == to_string(AbsVerdict::NotAbsolute))
    c.verdict = AbsVerdict::NotAbsolute;
  else
    throw FormatError("unknown verdict '" + v + "'");
  c.lambda1 = get_num(j, "lambda1");
  c.lambda2 = get_num(j, "lambda2");
  c.has_witness = get<bool>(j, "has_witness");
  c.k_branch = get<bool>(j, "k_branch");
  c.k = get_num(j, "k");
  c.p = get_num(j, "p");
  c.x = vector_from(j.at("x"), "x");
  c.y = vector_from(j.at("y"), "y");
  c.z = vector_from(j.at("z"), "z");
  c.gamma_a = matrix_from(j.at("gamma_a"), "gamma_a");
  c.gamma_b = matrix_from(j.at("gamma_b"), "gamma_b");
  c.identity_residual = get_num(j, "identity_residual");
  c.witness_min_eigenvalue = get_num(j, "witness_min_eigenvalue");
  return c;
}

}  // namespace

QCM QCMFile::qcm() const { return QCM(layout, matrix); }

QCMFile make_qcm_file(const QCM& v, std::string generator,
                      std::optional<std::uint64_t> seed, std::string label) {
  QCMFile f;
  f.layout = v.layout();
  f.matrix = v.matrix();
  f.generator = std::move(generator);
  f.seed = seed;
  f.label = std::move(label);
  return f;
}

json qcm_to_json(const QCMFile& f) {
  json data = json::array();
  for (Index i = 0; i < f.matrix.rows(); ++i)
    for (Index k = 0; k < f.matrix.cols(); ++k) data.push_back(f.matrix(i, k));
  json out = {{"schema_version", kSchemaVersion},
              {"kind", kKindQcm},
              {"m", f.layout.m},
              {"n", f.layout.n},
              {"ordering", to_string(f.layout.ordering)},
              {"matrix", data}};
  json meta = json::object();
  if (!f.label.empty()) meta["label"] = f.label;
  if (!f.generator.empty()) meta["generator"] = f.generator;
  if (f.seed) meta["seed"] = *f.seed;
  if (!meta.empty()) out["metadata"] = meta;
  return out;
}

QCMFile qcm_from_json(const json& j) {
  check_version(j, kKindQcm);
  QCMFile f;
  f.layout.m = get<int>(j, "m");
  f.layout.n = get<int>(j, "n");
  try {
    f.layout.ordering = j.contains("ordering")
                            ? ordering_from_string(get<std::string>(j, "ordering"))
                            : Ordering::ModeWise;
    f.layout.validate();
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  if (!j.contains("matrix")) throw FormatError("missing field 'matrix'");
  const Index d = f.layout.dim();
  const MatrixXd raw = flat_matrix(j.at("matrix"), d, d, "matrix");
  f.matrix = symmetrize(raw);
  const double scale = std::max(f.matrix.norm(), 1.0);
  if ((raw - f.matrix).norm() > 1e-12 * scale)
    f.warnings.push_back("matrix was not symmetric; symmetrised");
  const QcmCheck chk = is_qcm(f.matrix, f.layout);
  if (!chk.valid) {
    std::ostringstream os;
    os << "matrix is not a valid QCM (min eig of V + iΩ = " << chk.min_eigenvalue << ")";
    f.warnings.push_back(os.str());
  }
  if (j.contains("metadata")) {
    const json& meta = j.at("metadata");
    if (meta.contains("label")) f.label = get<std::string>(meta, "label");
    if (meta.contains("generator")) f.generator = get<std::string>(meta, "generator");
    if (meta.contains("seed")) f.seed = get<std::uint64_t>(meta, "seed");
  }
  return f;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte, "parse error at byte " + std::to_string(e.byte) +
                                 ": " + e.what());
  }
}

std::string dump_document(const json& j) { return j.dump(2) + "\n"; }

QCMFile parse_qcm(const std::string& text) { return qcm_from_json(parse_document(text)); }
QCMFile load_qcm(const std::string& path) { return parse_qcm(read_text(path)); }
void save_qcm(const std::string& path, const QCMFile& f) {
  write_text(path, dump_document(qcm_to_json(f)));
}

std::string digest(const QCMFile& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::int32_t dims[2] = {f.layout.m, f.layout.n};
  h = fnv1a(h, dims, sizeof dims);
  const std::string ord = to_string(f.layout.ordering);
  h = fnv1a(h, ord.data(), ord.size());
  for (Index i = 0; i < f.matrix.rows(); ++i)
    for (Index k = 0; k < f.matrix.cols(); ++k) {
      std::uint64_t bits;
      const double x = f.matrix(i, k);
      std::memcpy(&bits, &x, sizeof bits);
      h = fnv1a(h, &bits, sizeof bits);
    }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CertFile make_cert_file(const QCMFile& input, const SeparabilityCert& c,
                        const Tolerances& tol) {
  CertFile f;
  f.kind = CertFile::Kind::Separability;
  f.input = input;
  f.input_digest = digest(input);
  f.tol = tol;
  f.sep = c;
  return f;
}

CertFile make_cert_file(const QCMFile& input, const AbsSepCert& c,
                        const Tolerances& tol) {
  CertFile f;
  f.kind = CertFile::Kind::AbsoluteSeparability;
  f.input = input;
  f.input_digest = digest(input);
  f.tol = tol;
  f.abs = c;
  return f;
}

json cert_to_json(const CertFile& f) {
  const bool sep = f.kind == CertFile::Kind::Separability;
  return {{"schema_version", kSchemaVersion},
          {"kind", sep ? kKindSep : kKindAbs},
          {"tool_version", f.tool_version},
          {"input_digest", f.input_digest},
          {"tolerances", {{"psd", f.tol.psd}, {"alg", f.tol.alg}, {"verdict", f.tol.verdict}}},
          {"input", qcm_to_json(f.input)},
          {"certificate", sep ? sep_json(f.sep) : abs_json(f.abs)}};
}

CertFile cert_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("document must be a JSON object");
  const std::string kind = get<std::string>(j, "kind");
  if (kind != kKindSep && kind != kKindAbs)
    throw FormatError("not a certificate document (kind '" + kind + "')");
  check_version(j, kind.c_str());
  CertFile f;
  f.kind = kind == kKindSep ? CertFile::Kind::Separability
                            : CertFile::Kind::AbsoluteSeparability;
  f.tool_version = get<std::string>(j, "tool_version");
  f.input_digest = get<std::string>(j, "input_digest");
  const json& t = get<json>(j, "tolerances");
  f.tol.psd = get_num(t, "psd");
  f.tol.alg = get_num(t, "alg");
  f.tol.verdict = get_num(t, "verdict");
  if (!(f.tol.psd >= 0 && f.tol.alg >= 0 && f.tol.verdict >= 0))
    throw FormatError("tolerances must be non-negative numbers");
  f.input = qcm_from_json(get<json>(j, "input"));
  const json& c = get<json>(j, "certificate");
  try {
    if (f.kind == CertFile::Kind::Separability)
      f.sep = sep_from(c);
    else
      f.abs = abs_from(c);
  } catch (const json::exception& e) {
    throw FormatError(std::string("certificate: ") + e.what());
  }
  return f;
}

CertFile parse_cert(const std::string& text) { return cert_from_json(parse_document(text)); }
CertFile load_cert(const std::string& path) { return parse_cert(read_text(path)); }
void save_cert(const std::string& path, const CertFile& f) {
  write_text(path, dump_document(cert_to_json(f)));
}

Reverification reverify(const CertFile& f) {
  Reverification r;
  r.digest_ok = digest(f.input) == f.input_digest;
  if (!r.digest_ok) {
    r.reason = "input digest does not match the embedded matrix";
    return r;
  }
  try {
    const QCM v = f.input.qcm();
    if (f.kind == CertFile::Kind::Separability) {
      const CertCheck chk = validate_certificate(v, f.sep, f.tol);
      r.ok = chk.ok;
      r.reason = chk.reason;
      return r;
    }
    // λ₁λ₂ is recomputed; the verdict must agree with it.
    const AbsSepCert fresh = absolute_separability(v, f.tol);
    if (fresh.verdict != f.abs.verdict) {
      r.reason = "recomputed verdict differs from the stored one";
      return r;
    }
    if (f.abs.verdict == AbsVerdict::AbsolutelySeparable) {
      r.ok = validate_abs_cert(v, f.abs, f.tol);
      if (!r.ok) r.reason = "absolute separability witness does not validate";
    } else {
      r.ok = true;
    }
  } catch (const std::exception& e) {
    r.reason = e.what();
  }
  return r;
}

std::string read_text(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace gaussep
