#pragma once

// Versioned JSON documents for covariance matrices and certificates.
// The field-by-field layout is described in docs/file-format.md.

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaussep/passive.hpp"
#include "gaussep/separability.hpp"
#include "gaussep/symplectic.hpp"
#include "gaussep/tolerances.hpp"

namespace gaussep {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "gaussep 0.1.0";

/// Malformed document, wrong dimensions or unsupported schema version.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error; `byte` is the offset reported by the JSON parser.
class ParseError : public FormatError {
 public:
  ParseError(std::size_t byte, const std::string& what)
      : FormatError(what), byte(byte) {}
  std::size_t byte;
};

struct QCMFile {
  int schema_version = kSchemaVersion;
  ModeLayout layout;
  Eigen::MatrixXd matrix;  // in layout.ordering, symmetrised on load
  std::string label;
  std::string generator;
  std::optional<std::uint64_t> seed;
  /// Filled on load; a matrix that fails is_qcm is kept, since such files
  /// are legitimate negative inputs.
  std::vector<std::string> warnings;

  /// Throws DomainError if the matrix is not positive definite.
  QCM qcm() const;
};

QCMFile make_qcm_file(const QCM& v, std::string generator = {},
                      std::optional<std::uint64_t> seed = std::nullopt,
                      std::string label = {});

nlohmann::json qcm_to_json(const QCMFile& f);
QCMFile qcm_from_json(const nlohmann::json& j);

/// Parses text, rethrowing syntax errors as ParseError.
nlohmann::json parse_document(const std::string& text);
std::string dump_document(const nlohmann::json& j);

QCMFile parse_qcm(const std::string& text);
QCMFile load_qcm(const std::string& path);
void save_qcm(const std::string& path, const QCMFile& f);

/// FNV-1a over m, n, ordering and the bit patterns of the matrix entries.
std::string digest(const QCMFile& f);

struct CertFile {
  enum class Kind { Separability, AbsoluteSeparability };

  int schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  Kind kind = Kind::Separability;
  std::string input_digest;
  Tolerances tol;
  QCMFile input;
  SeparabilityCert sep;
  AbsSepCert abs;
};

CertFile make_cert_file(const QCMFile& input, const SeparabilityCert& c,
                        const Tolerances& tol);
CertFile make_cert_file(const QCMFile& input, const AbsSepCert& c,
                        const Tolerances& tol);

nlohmann::json cert_to_json(const CertFile& f);
CertFile cert_from_json(const nlohmann::json& j);
CertFile parse_cert(const std::string& text);
CertFile load_cert(const std::string& path);
void save_cert(const std::string& path, const CertFile& f);

struct Reverification {
  bool ok = false;
  bool digest_ok = false;
  std::string reason;
};

/// Checks the certificate against the embedded input alone.
Reverification reverify(const CertFile& f);

/// Read/write a whole file or stdin/stdout ("-").
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace gaussep
