#include <fstream>
#include <sstream>

#include "scv/experiments.hpp"

namespace scv {

Matrix HamiltonianSpec::matrix() const {
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix h = Matrix::Zero(d, d);
  for (const auto& [c, p] : terms) h += c * p.to_matrix();
  return h;
}

PauliSet HamiltonianSpec::term_set() const {
  PauliSet s(n);
  for (const auto& [c, p] : terms)
    if (c != 0.0) s.insert(p);
  return s;
}

HamiltonianSpec build_heisenberg(int n, bool open_boundary) {
  if (n < 2) throw std::invalid_argument("build_heisenberg: need at least 2 qubits");
  HamiltonianSpec h{n, {}};
  const int bonds = open_boundary ? n - 1 : n;
  for (int i = 0; i < bonds; ++i) {
    const int j = (i + 1) % n;
    for (char c : {'X', 'Y', 'Z'}) {
      h.terms.emplace_back(1.0, multiply(PauliString::single(n, i, c), PauliString::single(n, j, c)));
    }
  }
  return h;
}

FloquetModel build_floquet(int n, bool open_boundary) {
  if (n < 2) throw std::invalid_argument("build_floquet: need at least 2 qubits");
  FloquetModel f{{n, {}}, {n, {}}};
  for (int i = 0; i < n; ++i) f.hx.terms.emplace_back(1.0, PauliString::single(n, i, 'X'));
  const int bonds = open_boundary ? n - 1 : n;
  for (int i = 0; i < bonds; ++i) {
    f.hz.terms.emplace_back(1.0, multiply(PauliString::single(n, i, 'Z'), PauliString::single(n, (i + 1) % n, 'Z')));
  }
  return f;
}

HamiltonianSpec build_code_hamiltonian(const std::string& code_id) {
  if (code_id != "5_1_3") throw std::invalid_argument("build_code_hamiltonian: unknown code '" + code_id + "'");
  HamiltonianSpec h{5, {}};
  for (const char* s : {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"}) h.terms.emplace_back(-1.0, PauliString::from_string(s));
  return h;
}

HamiltonianSpec parse_hamiltonian(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  HamiltonianSpec h;
  auto fail = [&](const std::string& why) {
    throw config_error(source + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string re_s, im_s, pauli, extra;
    if (!(ls >> re_s)) continue;
    if (!(ls >> im_s >> pauli)) fail("expected '<re> <im> <pauli>'");
    if (ls >> extra) fail("unexpected trailing token '" + extra + "'");
    double re = 0.0, im = 0.0;
    try {
      std::size_t used = 0;
      re = std::stod(re_s, &used);
      if (used != re_s.size()) throw std::invalid_argument("trailing");
      im = std::stod(im_s, &used);
      if (used != im_s.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail("malformed coefficient");
    }
    if (pauli.find_first_not_of("IXYZ") != std::string::npos) fail("Pauli string must use only I, X, Y, Z");
    if (std::abs(im) > 1e-12) fail("imaginary coefficient on a Hermitian Pauli term");
    const int n = static_cast<int>(pauli.size());
    if (h.terms.empty()) h.n = n;
    else if (n != h.n) fail("Pauli string length " + std::to_string(n) + " differs from " + std::to_string(h.n));
    h.terms.emplace_back(re, PauliString::from_string(pauli));
  }
  if (h.terms.empty()) throw config_error(source + ": no Hamiltonian terms");
  if (h.n > kMaxQubits) throw config_error(source + ": more than " + std::to_string(kMaxQubits) + " qubits");
  return h;
}

HamiltonianSpec load_hamiltonian(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open Hamiltonian file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_hamiltonian(ss.str(), path);
}

}  // namespace scv
