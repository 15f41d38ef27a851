#pragma once

// Command implementations behind the qca_lab executable. They write to
// caller-supplied streams and return process exit codes (0 success, 1
// negative verdict, input errors surface as exceptions and become 2).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qca/config.hpp"
#include "qca/dynamics.hpp"
#include "qca/expectation.hpp"

namespace qca::cli {

// fixed float formatting so CSV output is byte-stable across runs
inline std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Output files appear atomically: the content lands in a sibling temp file
// that is renamed into place once complete.
template <typename WriteFn>
void write_file_atomic(const std::string& path, WriteFn&& write) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::invalid_argument("cannot write " + tmp);
    write(out);
    out.flush();
    if (!out) throw std::invalid_argument("write to " + tmp + " failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::invalid_argument("cannot move " + tmp + " to " + path);
  }
}

inline nlohmann::ordered_json witness_json(const SolitonWitness& w) {
  nlohmann::ordered_json j;
  j["n"] = w.n;
  j["k"] = w.k.components();
  std::vector<std::string> entries;
  for (const auto& p : w.q.entries()) entries.push_back(format_poly(p));
  j["q"] = entries;
  return j;
}

inline nlohmann::ordered_json classifier_report_json(const ClassifierReport& r) {
  nlohmann::ordered_json j;
  j["verdict"] = verdict_name(r.verdict);
  j["horizon"] = r.horizon;
  j["exact"] = r.exact;
  j["witness"] = r.witness ? witness_json(*r.witness) : nlohmann::ordered_json(nullptr);
  if (r.periodic_n) {
    nlohmann::ordered_json cert;
    cert["n"] = *r.periodic_n;
    j["certificate"] = cert;
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

inline void print_warnings(const QcaConfig& cfg, std::ostream& err) {
  for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';
}

inline int cmd_verify(const QcaConfig& cfg, std::ostream& out) {
  out << "name: " << (cfg.name.empty() ? "(unnamed)" : cfg.name) << '\n';
  out << "size: " << cfg.matrix.size() << "x" << cfg.matrix.size()
      << ", variables: " << cfg.dims << '\n';
  const bool pu = is_pseudo_unitary(cfg.matrix);
  out << "pseudo-unitary: " << (pu ? "yes" : "no") << '\n';
  LaurentPoly det = determinant(cfg.matrix);
  out << "determinant: " << format_poly(det) << '\n';
  out << "determinant is a unit: " << (det.is_monomial() ? "yes" : "no")
      << (det.is_monomial() ? " (inverse over R exists)" : "") << '\n';
  return pu ? 0 : 1;
}

inline int cmd_classify(const QcaConfig& cfg, long horizon, std::ostream& out) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  ClassifierReport r = cfg.palindromic_t
                           ? classify_palindromic(*cfg.palindromic_t)
                           : classify(cfg.matrix, horizon);
  out << classifier_report_json(r).dump(2) << '\n';
  return 0;
}

// Initial observable for a config: a one-dimensional Pauli string mapped
// onto the matrix's bit convention (raw CAs of even size use the same
// x/z split).
inline ModuleVector initial_vector(const QcaConfig& cfg, const std::string& pauli) {
  if (cfg.dims != 1)
    throw std::invalid_argument("initial observables are one-dimensional strings");
  if (cfg.matrix.size() % 2 != 0)
    throw std::invalid_argument("odd matrix size has no Pauli encoding");
  PauliMonomial p = parse_pauli_string(pauli);
  return pauli_to_vec(p, cfg.matrix.size() / 2, 1);
}

inline void write_trajectory_svg(std::ostream& os, const Trajectory& t) {
  const double w = 800, h = 400, ml = 60, mb = 40, mt = 20, mr = 20;
  std::size_t ymax = 1;
  for (const auto& s : t.samples) ymax = std::max(ymax, s.hamming);
  const double xmax = static_cast<double>(t.samples.empty() ? 1 : t.samples.back().n);
  auto xpos = [&](double n) { return ml + (w - ml - mr) * (xmax == 0 ? 0 : n / xmax); };
  auto ypos = [&](double v) { return h - mb - (h - mb - mt) * v / static_cast<double>(ymax); };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
     << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  auto polyline = [&](const char* color, bool hamming) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& s : t.samples) {
      double v = static_cast<double>(hamming ? s.hamming : s.support);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", xpos(static_cast<double>(s.n)), ypos(v));
      os << buf;
    }
    os << "\"/>\n";
  };
  polyline("steelblue", true);
  polyline("darkorange", false);
  os << "<text x=\"" << ml << "\" y=\"" << mt - 5 << "\" font-size=\"12\">"
     << "hamming (blue), support (orange); max " << ymax << "</text>\n";
  os << "<text x=\"" << w - mr - 40 << "\" y=\"" << h - mb + 25
     << "\" font-size=\"12\">n = " << static_cast<long>(xmax) << "</text>\n";
  os << "</svg>\n";
}

inline int cmd_weights(const QcaConfig& cfg, const std::string& initial,
                       long steps, const std::string& out_path,
                       const std::string& svg_path, std::ostream& log) {
  ModuleVector q0 = initial_vector(cfg, initial);
  Trajectory t = weight_trajectory(cfg.matrix, q0, steps);
  write_file_atomic(out_path, [&](std::ostream& out) { write_trajectory_csv(out, t); });
  log << "wrote " << out_path << " (" << t.samples.size() << " rows)\n";
  if (!svg_path.empty()) {
    write_file_atomic(svg_path, [&](std::ostream& svg) { write_trajectory_svg(svg, t); });
    log << "wrote " << svg_path << '\n';
  }
  return 0;
}

inline int cmd_solitons(const QcaConfig& cfg, long n_max, Coord window,
                        std::ostream& out) {
  auto w = soliton_search(cfg.matrix, n_max, window);
  nlohmann::ordered_json j;
  j["horizon"] = n_max;
  j["witness"] = w ? witness_json(*w) : nlohmann::ordered_json(nullptr);
  out << j.dump(2) << '\n';
  if (!w) {
    out << "none up to horizon " << n_max << '\n';
    return 1;
  }
  return 0;
}

inline std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(s.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

inline int cmd_expect(const QcaConfig& cfg, const std::string& state_str,
                      const std::string& beta_str, const std::string& initials,
                      long steps, const std::string& out_path,
                      std::ostream& log) {
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
  ProductStateParams s = parse_state_params(state_str);
  BetaSpec b = parse_beta_spec(beta_str);
  AutomatonData a = build_automaton(moments_from_bloch(s), beta_coefficients(b));

  std::vector<std::string> names = split_csv(initials);
  for (const std::string& name : names) {
    ModuleVector q = initial_vector(cfg, name);
    std::string path = out_path;
    if (names.size() > 1) {
      std::size_t dot = path.rfind('.');
      if (dot == std::string::npos) dot = path.size();
      path = path.substr(0, dot) + "." + name + path.substr(dot);
    }
    write_file_atomic(path, [&](std::ostream& out) {
      out << "n,letter_word_start,abs_expectation\n";
      for (long n = 0; n <= steps; ++n) {
        LetterWord w = letter_word(q);
        double v = std::abs(evaluate(a, w.letters));
        out << n << ',' << w.start << ',' << fmt_g12(v) << '\n';
        if (n < steps) q = mat_apply(cfg.matrix, q);
      }
    });
    log << "wrote " << path << " (" << steps + 1 << " rows)\n";
  }
  return 0;
}

inline int cmd_certify(const std::string& state_str, int range,
                       int qubits_per_cell, int dims, std::ostream& out) {
  OneSiteMoments m = moments_from_bloch(parse_state_params(state_str));
  double lambda = lambda_of_state(m);
  double c = c_beta(qubits_per_cell, range, dims);
  bool ok = thermalization_certificate(m, qubits_per_cell, range, dims);
  double v = 1;
  for (int i = 0; i < dims; ++i) v *= static_cast<double>(2 * range + 1);
  out << "lambda: " << fmt_g12(lambda) << '\n';
  out << "ball volume V: " << fmt_g12(v) << '\n';
  out << "C = 2^(N V^2): " << fmt_g12(c) << '\n';
  out << "lambda * C: " << fmt_g12(lambda * c) << '\n';
  out << "certified: " << (ok ? "yes" : "no") << '\n';
  if (lambda >= 1.0 - 1e-12)
    out << "note: lambda = 1, the state is a Pauli stabilizer state\n";
  return ok ? 0 : 1;
}

}  // namespace qca::cli
