#include "locc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "locc/channels.hpp"
#include "locc/discrimination.hpp"

namespace locc::cli {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr double kFidelityThreshold = 1.0 - 1e-9;

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }
[[noreturn]] void validation_error(const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); }

std::string at(std::string_view field, std::size_t i) { return std::string(field) + "[" + std::to_string(i) + "]"; }

Complex parse_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    parse_error(where + ": complex entries must be [re, im] number pairs");
  }
  const Complex z(v[0].get<double>(), v[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) validation_error(where + ": entry is not finite");
  return z;
}

CMatrix parse_matrix(const json& v, int dim, const std::string& where) {
  if (!v.is_array()) parse_error(where + ": matrix must be an array of rows");
  if (static_cast<int>(v.size()) != dim) validation_error(where + ": matrix must have D = " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = v[r];
    if (!row.is_array()) parse_error(at(where, r) + ": row must be an array");
    if (static_cast<int>(row.size()) != dim) validation_error(at(where, r) + ": row must have D = " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c) m(r, c) = parse_complex(row[c], at(at(where, r), c));
  }
  return m;
}

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

ojson matrix_json(const CMatrix& m) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson vector_json(const CVector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v[i]));
  return out;
}

Tolerance effective_tolerance(const SetDocument& doc, const Flags& flags) {
  if (flags.tolerance) return Tolerance::checked(*flags.tolerance);
  if (doc.tolerance) return Tolerance::checked(*doc.tolerance);
  return Tolerance{};
}

MESet build_set(const SetDocument& doc, Tolerance tol) {
  try {
    return MESet(doc.dim, members(doc, tol), tol);
  } catch (const Error& e) {
    validation_error(e.message());
  }
}

void require_prime(const SetDocument& doc) {
  if (!is_prime(doc.dim)) validation_error("D: prime dimension required for this command, got " + std::to_string(doc.dim));
}

ojson copy_json(const CopyDecision& d) {
  ojson out;
  out["copiable"] = d.copiable;
  out["failure_reason"] = d.failure ? ojson(to_string(*d.failure)) : ojson(nullptr);
  if (!d.detail.empty()) out["detail"] = d.detail;
  if (d.witness) {
    out["exponents"] = d.witness->exponents;
    ojson phases = ojson::array();
    for (const auto& p : d.witness->phases) phases.push_back(complex_json(p));
    out["phases"] = std::move(phases);
    out["basis"] = matrix_json(d.witness->basis);
  }
  return out;
}

ojson schmidt_json(const std::optional<SchmidtWitness>& w) {
  if (!w) return nullptr;
  ojson out;
  out["e_basis"] = matrix_json(w->e_basis);
  out["f_basis"] = matrix_json(w->f_basis);
  out["coeffs"] = matrix_json(w->coeffs);
  return out;
}

// Right-normalized members as collective-noise operators W_j (x) W_j with
// uniform weights.
QChannel uniform_collective_noise(const MESet& set) {
  const auto ws = set.right_normalized();
  const int d = set.dim();
  QChannel ch{d * d, d * d, {}};
  const double amp = std::sqrt(1.0 / static_cast<double>(ws.size()));
  for (const auto& w : ws) ch.kraus.push_back(amp * kron(w, w));
  return ch;
}

struct Context {
  const SetDocument& doc;
  const Flags& flags;
  Tolerance tol;
  ojson& report;
};

using Handler = std::function<int(Context&)>;

// Copier and witness for commands that need a copiable set; fills the report
// and returns nullopt when the set is not copiable.
std::optional<std::pair<MESet, CopyWitness>> copiable_or_report(Context& ctx) {
  require_prime(ctx.doc);
  MESet set = build_set(ctx.doc, ctx.tol);
  const CopyDecision d = copiable_set_prime(set);
  ctx.report["copy"] = copy_json(d);
  if (!d.copiable) return std::nullopt;
  return std::make_pair(std::move(set), *d.witness);
}

int cmd_classify(Context& ctx) {
  require_prime(ctx.doc);
  const MESet set = build_set(ctx.doc, ctx.tol);
  const Classification c = classify_set_detailed(set);
  ctx.report["tier"] = to_string(c.tier);
  ctx.report["N"] = set.size();
  ctx.report["copy"] = copy_json(c.copy);
  ojson ssd;
  ssd["ssd"] = c.schmidt.has_value();
  if (ctx.doc.encoding == Encoding::BellIndices) {
    const auto cert = ssd_check_bell(ctx.doc.dim, ctx.doc.indices);
    ssd["certificate"] = cert ? ojson(*cert) : ojson(nullptr);
  }
  ssd["schmidt"] = schmidt_json(c.schmidt);
  ctx.report["ssd"] = std::move(ssd);
  ctx.report["canonical_cyclic"] = c.cyclic;
  return kExitOk;
}

int cmd_copy(Context& ctx) {
  auto found = copiable_or_report(ctx);
  if (!found) return kExitVerification;
  const auto& [set, witness] = *found;
  const Unitary copier = build_copier(witness);
  ctx.report["copier"] = matrix_json(copier.matrix());
  ojson fids = ojson::array();
  bool ok = true;
  for (int j = 0; j < set.size(); ++j) {
    const double f = copy_fidelity(set, j, execute_copy(set, j, copier));
    ok = ok && f >= kFidelityThreshold;
    fids.push_back(f);
  }
  ctx.report["fidelities"] = std::move(fids);
  ctx.report["verified"] = ok;
  return ok ? kExitOk : kExitVerification;
}

int cmd_discriminate(Context& ctx) {
  const MESet set = build_set(ctx.doc, ctx.tol);
  const auto witness = ssd_check_mes(set);
  ctx.report["ssd"] = witness.has_value();
  if (!witness) {
    ctx.report["verified"] = false;
    ctx.report["detail"] = "not-applicable: set is not simultaneously Schmidt decomposable";
    return kExitVerification;
  }
  ctx.report["schmidt"] = schmidt_json(witness);
  const Instrument inst = build_instrument(*witness, set.dim());
  const double completeness = completeness_error(inst);
  ctx.report["completeness_error"] = completeness;
  bool ok = completeness <= ctx.tol.eps;
  ojson members = ojson::array();
  for (int s = 0; s < set.size(); ++s) {
    ojson m;
    m["secret"] = s;
    try {
      const auto r = execute_discrimination(set, *witness, s);
      m["identified"] = r.identified;
      m["success_probability"] = r.distribution[s];
      m["distribution"] = r.distribution;
      m["outcome_probabilities"] = r.outcome_probabilities;
      ok = ok && r.identified == s && r.distribution[s] >= kFidelityThreshold;
    } catch (const Error& e) {
      m["error"] = e.what();
      ok = false;
    }
    members.push_back(std::move(m));
  }
  ctx.report["members"] = std::move(members);
  ctx.report["verified"] = ok;
  return ok ? kExitOk : kExitVerification;
}

int cmd_choi(Context& ctx) {
  const MESet set = build_set(ctx.doc, ctx.tol);
  ojson states = ojson::array();
  for (const auto& u : set.unitaries()) states.push_back(matrix_json(choi(unitary_channel(u.matrix()), ctx.tol).rho));
  ctx.report["choi_states"] = std::move(states);
  return kExitOk;
}

int cmd_channel_copy(Context& ctx) {
  auto found = copiable_or_report(ctx);
  if (!found) return kExitVerification;
  const auto& [set, witness] = *found;
  const Unitary copier = build_copier(witness);
  const ChannelCopier protocol = channel_copier_from(copier);
  std::vector<QChannel> channels;
  for (const auto& w : set.right_normalized()) channels.push_back(unitary_channel(w));
  const ChannelCheck check = channel_copy_verify(channels, protocol.encoder, protocol.decoders, ctx.tol);
  ctx.report["encoder"] = matrix_json(protocol.encoder.matrix());
  ctx.report["decoder"] = matrix_json(protocol.decoders.front());
  ctx.report["choi_distance"] = check.distance;
  ctx.report["verified"] = check.passed;
  return check.passed ? kExitOk : kExitVerification;
}

int cmd_distill(Context& ctx) {
  auto found = copiable_or_report(ctx);
  if (!found) return kExitVerification;
  const auto& [set, witness] = *found;
  const Unitary copier = build_copier(witness);
  const CMatrix a = CMatrix::Identity(set.size(), set.size()) / static_cast<double>(set.size());
  const CMatrix rho = maximally_correlated_state(set, a);
  const DistillResult r = distill(rho, copier, set[0].matrix(), ctx.tol);
  const double residual_error = max_abs_diff(r.residual, correlation_operator(set, a));
  ctx.report["correlations"] = matrix_json(a);
  ctx.report["fidelity"] = r.fidelity;
  ctx.report["residual_error"] = residual_error;
  ctx.report["extracted"] = vector_json(r.extracted);
  const bool ok = r.fidelity >= kFidelityThreshold && residual_error <= ctx.tol.eps;
  ctx.report["verified"] = ok;
  return ok ? kExitOk : kExitVerification;
}

int cmd_ecc(Context& ctx) {
  auto found = copiable_or_report(ctx);
  if (!found) return kExitVerification;
  const auto& [set, witness] = *found;
  const Unitary copier = build_copier(witness);
  const QChannel noise = uniform_collective_noise(set);
  const CMatrix ancilla = default_ancilla(witness.basis);
  const ChannelCheck encoded = error_correct_verify(noise, copier, ancilla, ctx.tol);
  const ChannelCheck bare = error_correct_verify(noise, Unitary::identity(set.dim() * set.dim()), ancilla, ctx.tol);
  ctx.report["encoded_distance"] = encoded.distance;
  ctx.report["unencoded_distance"] = bare.distance;
  ctx.report["verified"] = encoded.passed;
  return encoded.passed ? kExitOk : kExitVerification;
}

int cmd_qkd(Context& ctx) {
  if (ctx.doc.dim != 2) validation_error("D: qkd requires D = 2");
  const MESet set = build_set(ctx.doc, ctx.tol);
  const QKDReport r = qkd_simulate(uniform_collective_noise(set), ctx.flags.rounds, ctx.flags.seed);
  ctx.report["rounds"] = r.rounds;
  ctx.report["sifted"] = r.sifted;
  ctx.report["errors"] = r.errors;
  ctx.report["qber"] = r.qber;
  ctx.report["sift_fraction"] = r.sift_fraction();
  ctx.report["seed"] = r.seed;
  const bool ok = r.errors == 0;
  ctx.report["verified"] = ok;
  return ok ? kExitOk : kExitVerification;
}

int cmd_lemma_scan(Context& ctx) {
  auto found = copiable_or_report(ctx);
  if (!found) return kExitVerification;
  const auto& [set, witness] = *found;
  const Unitary copier = build_copier(witness);
  const CMatrix vv = kron(witness.basis, witness.basis);
  const Unitary in_basis(vv.adjoint() * copier.matrix() * vv, Tolerance{1e-8});
  const NullspaceScan scan = lemma_nullspace_scan(in_basis, set.dim(), ctx.tol);
  ojson basis = ojson::array();
  for (const auto& m : scan.basis) basis.push_back(matrix_json(m));
  ctx.report["nullspace_dimension"] = scan.basis.size();
  ctx.report["nullspace_basis"] = std::move(basis);
  ctx.report["max_offdiagonal"] = scan.max_offdiagonal;
  ctx.report["all_diagonal"] = scan.all_diagonal;
  ctx.report["verified"] = scan.all_diagonal;
  return scan.all_diagonal ? kExitOk : kExitVerification;
}

const std::map<std::string, Handler, std::less<>>& handlers() {
  static const std::map<std::string, Handler, std::less<>> table{
      {"classify", cmd_classify},     {"copy", cmd_copy}, {"discriminate", cmd_discriminate},
      {"choi", cmd_choi},             {"channel-copy", cmd_channel_copy}, {"distill", cmd_distill},
      {"ecc", cmd_ecc},               {"qkd", cmd_qkd},   {"lemma-scan", cmd_lemma_scan},
  };
  return table;
}

}  // namespace

bool operator==(const SetDocument& a, const SetDocument& b) {
  if (a.dim != b.dim || a.encoding != b.encoding || a.indices != b.indices || a.tolerance != b.tolerance) return false;
  if (a.matrices.size() != b.matrices.size()) return false;
  for (std::size_t i = 0; i < a.matrices.size(); ++i)
    if (a.matrices[i].rows() != b.matrices[i].rows() || a.matrices[i] != b.matrices[i]) return false;
  return true;
}

SetDocument parse_set_document(std::string_view text, std::optional<double> tolerance_override) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("malformed document: ") + e.what());
  }
  if (!root.is_object()) parse_error("document must be a JSON object");

  SetDocument doc;
  if (!root.contains("D") || !root["D"].is_number_integer()) parse_error("D: required integer field");
  doc.dim = root["D"].get<int>();
  if (doc.dim < 2) validation_error("D: must be at least 2");

  if (!root.contains("encoding") || !root["encoding"].is_string()) parse_error("encoding: required string field");
  const auto encoding = root["encoding"].get<std::string>();
  if (encoding == "bell_indices") {
    doc.encoding = Encoding::BellIndices;
  } else if (encoding == "explicit_unitaries") {
    doc.encoding = Encoding::ExplicitUnitaries;
  } else {
    parse_error("encoding: expected \"bell_indices\" or \"explicit_unitaries\", got \"" + encoding + "\"");
  }

  if (root.contains("tolerance")) {
    if (!root["tolerance"].is_number()) parse_error("tolerance: must be a number");
    doc.tolerance = root["tolerance"].get<double>();
  }
  Tolerance tol;
  try {
    tol = Tolerance::checked(tolerance_override.value_or(doc.tolerance.value_or(Tolerance{}.eps)));
  } catch (const Error& e) {
    validation_error("tolerance: " + e.message());
  }

  if (!root.contains("payload") || !root["payload"].is_array()) parse_error("payload: required array field");
  const json& payload = root["payload"];
  if (payload.empty()) validation_error("payload: must contain at least one member");

  for (std::size_t i = 0; i < payload.size(); ++i) {
    const std::string where = at("payload", i);
    if (doc.encoding == Encoding::BellIndices) {
      const json& p = payload[i];
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
        parse_error(where + ": Bell index must be an [n, m] integer pair");
      }
      const BellIndex idx{p[0].get<int>(), p[1].get<int>()};
      if (idx.n < 0 || idx.n >= doc.dim || idx.m < 0 || idx.m >= doc.dim) {
        validation_error(where + ": Bell index out of range for D = " + std::to_string(doc.dim));
      }
      doc.indices.push_back(idx);
    } else {
      CMatrix m = parse_matrix(payload[i], doc.dim, where);
      if (!is_unitary(m, tol.eps)) validation_error(where + ": not unitary");
      doc.matrices.push_back(std::move(m));
    }
  }
  // Orthogonality of the members.
  try {
    MESet(doc.dim, members(doc, tol), tol);
  } catch (const Error& e) {
    validation_error(e.message());
  }
  return doc;
}

ojson to_json(const SetDocument& doc) {
  ojson out;
  out["D"] = doc.dim;
  out["encoding"] = doc.encoding == Encoding::BellIndices ? "bell_indices" : "explicit_unitaries";
  ojson payload = ojson::array();
  if (doc.encoding == Encoding::BellIndices) {
    for (const auto& i : doc.indices) payload.push_back(ojson::array({i.n, i.m}));
  } else {
    for (const auto& m : doc.matrices) payload.push_back(matrix_json(m));
  }
  out["payload"] = std::move(payload);
  if (doc.tolerance) out["tolerance"] = *doc.tolerance;
  return out;
}

std::vector<Unitary> members(const SetDocument& doc, Tolerance tol) {
  std::vector<Unitary> out;
  if (doc.encoding == Encoding::BellIndices) {
    for (const auto& i : doc.indices) out.push_back(weyl_op(doc.dim, i));
  } else {
    for (const auto& m : doc.matrices) out.emplace_back(m, tol);
  }
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, _] : handlers()) n.push_back(name);
    return n;
  }();
  return names;
}

CommandResult run_command(std::string_view command, const SetDocument& doc, const Flags& flags) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw Error(ErrorKind::ValidationError, "unknown command \"" + std::string(command) + "\"");

  const auto start = std::chrono::steady_clock::now();
  CommandResult result;
  ojson& report = result.report;
  report["command"] = std::string(command);
  report["document"] = to_json(doc);
  const Tolerance tol = effective_tolerance(doc, flags);
  report["tolerance"] = tol.eps;
  Context ctx{doc, flags, tol, report};
  result.exit_code = it->second(ctx);
  if (flags.timings) {
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
    report["timings"] = {{"elapsed_ms", elapsed.count()}};
  }
  return result;
}

CommandResult run_text(std::string_view command, std::string_view text, const Flags& flags, std::string& diagnostics) {
  try {
    const SetDocument doc = parse_set_document(text, flags.tolerance);
    return run_command(command, doc, flags);
  } catch (const Error& e) {
    diagnostics = e.what();
    return CommandResult{nullptr, kExitInput};
  }
}

std::string serialize(const ojson& report) { return report.dump(2) + "\n"; }

}  // namespace locc::cli
