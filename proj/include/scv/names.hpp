#pragma once

#include "scv/constructions.hpp"

namespace scv {

struct UnknownChain : ScvError {
  explicit UnknownChain(const std::string& m) : ScvError(m) {}
};

struct ArityMismatch : ScvError {
  explicit ArityMismatch(const std::string& m) : ScvError(m) {}
};

// Addressable chain ids: "mu:n=2", "alpha:n=3", "beta:n=2:star=+-",
// "ell_plus:n=2", "ell:n=1", "eta_piece:n=2:star=+-:S=1:T=2",
// "eta_plus:n=2", "eta:n=2", "eta_glued:n=2", "alpha_ell_mu:n=2",
// "gamma_plus:n=2", "gamma:n=2".
struct ChainId {
  std::string head;
  int n = 1;
  SignString star;
  bool has_star = false;
  AxisSet S, T;
};

namespace detail {

inline AxisSet parse_axis_list(const std::string& text) {
  AxisSet out;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (!token.empty()) out.push_back(std::stoi(token));
      token.clear();
    } else {
      token += c;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline SignString parse_star(const std::string& text, int n) {
  if (text == "o" || text.empty()) return SignString::empty();
  std::vector<int> signs;
  for (char c : text) {
    if (c == '+') signs.push_back(+1);
    else if (c == '-') signs.push_back(-1);
    else throw UnknownChain("bad sign character in star=" + text);
  }
  if (static_cast<int>(signs.size()) != n) {
    throw UnknownChain("star=" + text + " does not have " + std::to_string(n) + " signs");
  }
  return SignString::over(axis_range(n), signs);
}

}  // namespace detail

inline ChainId parse_chain_id(const std::string& id) {
  ChainId out;
  std::vector<std::string> parts;
  std::string token;
  for (char c : id + ":") {
    if (c == ':') {
      parts.push_back(token);
      token.clear();
    } else {
      token += c;
    }
  }
  if (parts.empty() || parts[0].empty()) throw UnknownChain("empty chain id");
  out.head = parts[0];
  std::string star_text;
  bool star_seen = false;
  std::string s_text, t_text;
  for (size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw UnknownChain("bad id segment '" + parts[i] + "'");
    std::string key = parts[i].substr(0, eq);
    std::string value = parts[i].substr(eq + 1);
    if (key == "n") out.n = std::stoi(value);
    else if (key == "star") { star_text = value; star_seen = true; }
    else if (key == "S") s_text = value;
    else if (key == "T") t_text = value;
    else throw UnknownChain("unknown id key '" + key + "'");
  }
  out.S = detail::parse_axis_list(s_text);
  out.T = detail::parse_axis_list(t_text);
  if (star_seen) {
    out.star = detail::parse_star(star_text, out.n);
    out.has_star = true;
  }
  if (out.n < 0) throw UnknownChain("negative dimension");
  return out;
}

// Resolves an id to a chain. Expensive families (the glued cycle, gamma) are
// rebuilt per call; callers that need both should reuse the glued cube.
inline Chain resolve_chain(const std::string& id) {
  ChainId c = parse_chain_id(id);
  const int n = c.n;
  auto need_star = [&] {
    if (!c.has_star) throw UnknownChain(id + " requires star=");
  };
  if (c.head == "mu") return mu_chain(n);
  if (c.head == "alpha") return alpha_chain(n);
  if (c.head == "beta") {
    need_star();
    return chain_of(beta_cube(n, c.star));
  }
  if (c.head == "ell_plus") return chain_of(ell_plus_cube(n));
  if (c.head == "ell") return ell_chain(n);
  if (c.head == "eta_piece") {
    need_star();
    return chain_of(eta_piece({n, c.star, c.S, c.T}));
  }
  if (c.head == "eta_plus") return eta_plus_chain(n);
  if (c.head == "eta") return eta_chain(n);
  if (c.head == "eta_glued") return chain_of(glued_eta_plus_cube(n));
  if (c.head == "alpha_ell_mu") return chain_of(alpha_ell_mu_cube(n));
  if (c.head == "gamma_plus") return chain_of(gamma_plus_cube(n, glued_eta_plus_cube(n)));
  if (c.head == "gamma") return gamma_chain(n, gamma_plus_cube(n, glued_eta_plus_cube(n)));
  throw UnknownChain("unknown chain '" + c.head + "'");
}

// Named chains whose every instantiation must be a valid configuration;
// gamma is included through dimension 2.
inline std::vector<std::string> validity_corpus(int n) {
  std::vector<std::string> ids = {"mu:n=" + std::to_string(n), "alpha:n=" + std::to_string(n),
                                  "ell_plus:n=" + std::to_string(n),
                                  "alpha_ell_mu:n=" + std::to_string(n),
                                  "eta_glued:n=" + std::to_string(n)};
  for (const auto& star : all_sign_strings(axis_range(n))) {
    ids.push_back("beta:n=" + std::to_string(n) + ":star=" + star.to_string());
  }
  for (const auto& key : eta_piece_keys(n)) {
    std::string id = "eta_piece:n=" + std::to_string(n) + ":star=" + key.star.to_string() + ":S=";
    for (size_t i = 0; i < key.S.size(); ++i) id += (i ? "," : "") + std::to_string(key.S[i]);
    id += ":T=";
    for (size_t i = 0; i < key.T.size(); ++i) id += (i ? "," : "") + std::to_string(key.T[i]);
    ids.push_back(id);
  }
  if (n <= 2) {
    ids.push_back("gamma_plus:n=" + std::to_string(n));
  }
  return ids;
}

}  // namespace scv
