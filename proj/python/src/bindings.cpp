#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "locc/channels.hpp"
#include "locc/cli.hpp"
#include "locc/copying.hpp"
#include "locc/discrimination.hpp"
#include "locc/weyl.hpp"

namespace py = pybind11;
using namespace locc;

namespace {

MESet make_set(const std::vector<CMatrix>& ms, double eps) {
  if (ms.empty()) throw Error(ErrorKind::ValidationError, "empty set");
  const Tolerance tol = Tolerance::checked(eps);
  std::vector<Unitary> us;
  for (const auto& m : ms) us.emplace_back(m, tol);
  return MESet(static_cast<int>(ms.front().rows()), us, tol);
}

std::vector<BellIndex> to_labels(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<BellIndex> out;
  for (const auto& [n, m] : pairs) out.push_back({n, m});
  return out;
}

QChannel make_channel(const std::vector<CMatrix>& kraus) {
  if (kraus.empty()) throw Error(ErrorKind::InvalidChannel, "no Kraus operators");
  QChannel ch{static_cast<int>(kraus.front().cols()), static_cast<int>(kraus.front().rows()), kraus};
  ch.validate();
  return ch;
}

py::dict decision_dict(const CopyDecision& d) {
  py::dict out;
  out["copiable"] = d.copiable;
  out["failure"] = d.failure ? py::object(py::str(to_string(*d.failure))) : py::object(py::none());
  out["detail"] = d.detail;
  if (d.witness) {
    out["exponents"] = d.witness->exponents;
    out["phases"] = d.witness->phases;
    out["basis"] = d.witness->basis;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "LOCC copying and discrimination of maximally entangled states";

  py::register_exception<Error>(m, "LoccError", PyExc_ValueError);

  m.def("pauli_z", [](int d) { return pauli_z(d).matrix(); }, py::arg("d"));
  m.def("pauli_x", [](int d) { return pauli_x(d).matrix(); }, py::arg("d"));
  m.def("weyl_op", [](int d, int n, int mm) { return weyl_op(d, {n, mm}).matrix(); }, py::arg("d"), py::arg("n"),
        py::arg("m"));
  m.def("gen_cnot", [](int d) { return gen_cnot(d).matrix(); }, py::arg("d"));
  m.def("bell_state", [](int d, int n, int mm) { return CVector(bell_state(d, {n, mm})); }, py::arg("d"),
        py::arg("n") = 0, py::arg("m") = 0);
  m.def("bell_unitaries", [](int d, const std::vector<std::pair<int, int>>& labels) {
    const MESet set = bell_set(d, to_labels(labels));
    std::vector<CMatrix> out;
    for (const auto& u : set.unitaries()) out.push_back(u.matrix());
    return out;
  }, py::arg("d"), py::arg("labels"));

  m.def("copiable_pair", [](const CMatrix& t, double eps) {
    const PairVerdict v = copiable_pair(Unitary(t, Tolerance::checked(eps)), static_cast<int>(t.rows()), Tolerance::checked(eps));
    py::dict out;
    out["copiable"] = v.copiable;
    out["order"] = v.order;
    out["diagnostic"] = v.diagnostic;
    return out;
  }, py::arg("t"), py::arg("eps") = 1e-9);
  m.def("spectral_similarity_oracle", [](const CMatrix& t) {
    return spectral_similarity_oracle(Unitary(t, Tolerance{1e-8}), static_cast<int>(t.rows()));
  }, py::arg("t"));
  m.def("copiable_set", [](const std::vector<CMatrix>& us, double eps) { return decision_dict(copiable_set_prime(make_set(us, eps))); },
        py::arg("unitaries"), py::arg("eps") = 1e-9);
  m.def("build_copier", [](const std::vector<CMatrix>& us, double eps) {
    const CopyDecision d = copiable_set_prime(make_set(us, eps));
    if (!d.copiable) throw Error(ErrorKind::InvalidWitness, "set is not locally copiable: " + d.detail);
    return build_copier(*d.witness).matrix();
  }, py::arg("unitaries"), py::arg("eps") = 1e-9);
  m.def("execute_copy", [](const std::vector<CMatrix>& us, int j, const CMatrix& copier, double eps) {
    const MESet set = make_set(us, eps);
    const StateVector out = execute_copy(set, j, Unitary(copier, Tolerance::checked(eps)));
    return py::make_tuple(CVector(out), copy_fidelity(set, j, out));
  }, py::arg("unitaries"), py::arg("j"), py::arg("copier"), py::arg("eps") = 1e-9);

  m.def("ssd_check_bell", [](int d, const std::vector<std::pair<int, int>>& labels) -> py::object {
    const auto cert = ssd_check_bell(d, to_labels(labels));
    if (!cert) return py::none();
    return py::make_tuple((*cert)[0], (*cert)[1], (*cert)[2]);
  }, py::arg("d"), py::arg("labels"));
  m.def("classify", [](const std::vector<CMatrix>& us, double eps) { return to_string(classify_set(make_set(us, eps))); },
        py::arg("unitaries"), py::arg("eps") = 1e-9);
  m.def("discriminate", [](const std::vector<CMatrix>& us, int secret, double eps) {
    const MESet set = make_set(us, eps);
    const auto w = ssd_check_mes(set);
    if (!w) throw Error(ErrorKind::NotApplicable, "set has no simultaneous Schmidt decomposition");
    const DiscriminationResult r = execute_discrimination(set, *w, secret);
    py::dict out;
    out["identified"] = r.identified;
    out["distribution"] = r.distribution;
    out["completeness_error"] = completeness_error(build_instrument(*w, set.dim()));
    return out;
  }, py::arg("unitaries"), py::arg("secret"), py::arg("eps") = 1e-9);

  m.def("choi", [](const std::vector<CMatrix>& kraus) { return choi(make_channel(kraus)).rho; }, py::arg("kraus"));
  m.def("collective_noise", [](int d, const std::vector<std::pair<int, int>>& labels, const std::vector<double>& probs) {
    return collective_channel({d, to_labels(labels), probs, std::nullopt}).kraus;
  }, py::arg("d"), py::arg("labels"), py::arg("probabilities"));
  m.def("distill", [](const CMatrix& rho, const CMatrix& copier) {
    const DistillResult r = distill(rho, Unitary(copier, Tolerance{1e-8}));
    py::dict out;
    out["residual"] = r.residual;
    out["extracted"] = CVector(r.extracted);
    out["fidelity"] = r.fidelity;
    return out;
  }, py::arg("rho"), py::arg("copier"));
  m.def("error_correct_verify", [](const std::vector<CMatrix>& kraus, const CMatrix& encoder, const CMatrix& ancilla) {
    const ChannelCheck c = error_correct_verify(make_channel(kraus), Unitary(encoder, Tolerance{1e-8}), ancilla);
    return py::make_tuple(c.passed, c.distance);
  }, py::arg("kraus"), py::arg("encoder"), py::arg("ancilla"));
  m.def("qkd_simulate", [](const std::vector<CMatrix>& kraus, std::uint64_t rounds, std::uint64_t seed) {
    const QKDReport r = qkd_simulate(make_channel(kraus), rounds, seed);
    py::dict out;
    out["rounds"] = r.rounds;
    out["sifted"] = r.sifted;
    out["errors"] = r.errors;
    out["qber"] = r.qber;
    out["sift_fraction"] = r.sift_fraction();
    return out;
  }, py::arg("kraus"), py::arg("rounds"), py::arg("seed"));
  m.def("lemma_nullspace_scan", [](const CMatrix& copier, int d) {
    const NullspaceScan s = lemma_nullspace_scan(Unitary(copier, Tolerance{1e-8}), d);
    py::dict out;
    out["basis"] = s.basis;
    out["all_diagonal"] = s.all_diagonal;
    out["max_offdiagonal"] = s.max_offdiagonal;
    return out;
  }, py::arg("copier"), py::arg("d"));

  m.def("run", [](const std::string& command, const std::string& document, std::optional<double> tolerance,
                  std::uint64_t seed, std::uint64_t rounds) {
    cli::Flags flags;
    flags.tolerance = tolerance;
    flags.seed = seed;
    flags.rounds = rounds;
    std::string diagnostics;
    const cli::CommandResult r = cli::run_text(command, document, flags, diagnostics);
    return py::make_tuple(r.exit_code, cli::serialize(r.report), diagnostics);
  }, py::arg("command"), py::arg("document"), py::arg("tolerance") = py::none(), py::arg("seed") = 0,
     py::arg("rounds") = 10000);
  m.attr("commands") = cli::command_names();
}
