#include <kamkit/io.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kamkit::io {

namespace {

using nlohmann::json;

json series_terms(const ScaledSeries& f) {
  json terms = json::array();
  for (const auto& [idx, a] : f.terms()) {
    terms.push_back(json{{"fourier", idx.fourier},
                         {"momentum", idx.momentum},
                         {"tdeg", idx.tdeg},
                         {"re", a.real()},
                         {"im", a.imag()}});
  }
  return terms;
}

json trunc_json(const Truncation& tr) {
  return json{{"max_fourier", tr.max_fourier},
              {"max_momentum_deg", tr.max_momentum_deg},
              {"max_tdeg", tr.max_tdeg}};
}

Truncation trunc_from(const json& j) {
  return Truncation{j.at("max_fourier").get<int>(),
                    j.at("max_momentum_deg").get<int>(),
                    j.at("max_tdeg").get<int>()};
}

void fill_terms(ScaledSeries& f, const json& terms) {
  for (const auto& term : terms) {
    MultiIndex idx(term.at("fourier").get<std::vector<int>>(),
                   term.at("momentum").get<std::vector<int>>(),
                   term.value("tdeg", 0));
    f.add_term(idx, {term.at("re").get<double>(), term.value("im", 0.0)});
  }
}

json parse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    throw DomainError(std::string(what) + ": malformed JSON");
  }
  return j;
}

json report_json(const ConvergenceReport& report) {
  return json{{"converged", report.converged},
              {"rho", report.rho},
              {"q", report.q},
              {"fitted_order", report.fitted_order},
              {"quadratic_constant", report.quadratic_constant},
              {"envelope_pass", report.envelope_pass},
              {"sufficient_condition_ok", report.sufficient_condition_ok},
              {"basin_ok", report.basin_ok},
              {"budget_ok", report.budget_ok},
              {"iterations", report.iterations.size()}};
}

}  // namespace

std::string series_to_json(const ScaledSeries& f, int indent) {
  json j{{"dim", f.dim()},
         {"mode", f.mode() == PhaseMode::torus ? "torus" : "singular"},
         {"real", f.real_flag()},
         {"trunc", trunc_json(f.trunc())},
         {"terms", series_terms(f)}};
  return j.dump(indent);
}

ScaledSeries series_from_json(const std::string& text) {
  const json j = parse(text, "series_from_json");
  try {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode != "torus" && mode != "singular") {
      throw DomainError("series_from_json: unknown mode " + mode);
    }
    ScaledSeries f(j.at("dim").get<int>(),
                   mode == "torus" ? PhaseMode::torus : PhaseMode::singular,
                   trunc_from(j.at("trunc")), j.value("real", false));
    fill_terms(f, j.at("terms"));
    return f;
  } catch (const json::exception& e) {
    throw DomainError(std::string("series_from_json: ") + e.what());
  }
}

std::string torus_hamiltonian_to_json(const TorusHamiltonian& h, int indent) {
  const int n = static_cast<int>(h.alpha.size());
  json beta = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(h.beta(i, j));
    beta.push_back(row);
  }
  json j{{"dim", n},
         {"alpha", std::vector<double>(h.alpha.data(), h.alpha.data() + n)},
         {"beta", beta},
         {"trunc", trunc_json(h.remainder.trunc())},
         {"real", h.remainder.real_flag()},
         {"remainder", series_terms(h.remainder)}};
  return j.dump(indent);
}

TorusHamiltonian torus_hamiltonian_from_json(const std::string& text) {
  const json j = parse(text, "torus_hamiltonian_from_json");
  try {
    const int n = j.at("dim").get<int>();
    const auto alpha = j.at("alpha").get<std::vector<double>>();
    if (static_cast<int>(alpha.size()) != n) {
      throw DomainError("torus_hamiltonian_from_json: alpha length mismatch");
    }
    TorusHamiltonian h{Eigen::VectorXd(n), Eigen::MatrixXd(n, n),
                       ScaledSeries(n, PhaseMode::torus, trunc_from(j.at("trunc")),
                                    j.value("real", true))};
    for (int i = 0; i < n; ++i) h.alpha(i) = alpha[static_cast<std::size_t>(i)];
    const json& beta = j.at("beta");
    if (static_cast<int>(beta.size()) != n) {
      throw DomainError("torus_hamiltonian_from_json: beta shape mismatch");
    }
    for (int i = 0; i < n; ++i) {
      const auto row = beta.at(i).get<std::vector<double>>();
      if (static_cast<int>(row.size()) != n) {
        throw DomainError("torus_hamiltonian_from_json: beta shape mismatch");
      }
      for (int k = 0; k < n; ++k) h.beta(i, k) = row[static_cast<std::size_t>(k)];
    }
    fill_terms(h.remainder, j.at("remainder"));
    return h;
  } catch (const json::exception& e) {
    throw DomainError(std::string("torus_hamiltonian_from_json: ") + e.what());
  }
}

std::string singular_hamiltonian_to_json(const SingularHamiltonian& h,
                                         int indent) {
  const int n = static_cast<int>(h.omega.size());
  json j{{"dim", n},
         {"omega", std::vector<double>(h.omega.data(), h.omega.data() + n)},
         {"trunc", trunc_json(h.remainder.trunc())},
         {"real", h.remainder.real_flag()},
         {"remainder", series_terms(h.remainder)}};
  return j.dump(indent);
}

SingularHamiltonian singular_hamiltonian_from_json(const std::string& text) {
  const json j = parse(text, "singular_hamiltonian_from_json");
  try {
    const int n = j.at("dim").get<int>();
    const auto omega = j.at("omega").get<std::vector<double>>();
    if (static_cast<int>(omega.size()) != n) {
      throw DomainError("singular_hamiltonian_from_json: omega length mismatch");
    }
    SingularHamiltonian h{Eigen::VectorXd(n),
                          ScaledSeries(n, PhaseMode::singular,
                                       trunc_from(j.at("trunc")),
                                       j.value("real", true))};
    for (int i = 0; i < n; ++i) h.omega(i) = omega[static_cast<std::size_t>(i)];
    fill_terms(h.remainder, j.at("remainder"));
    return h;
  } catch (const json::exception& e) {
    throw DomainError(std::string("singular_hamiltonian_from_json: ") + e.what());
  }
}

std::string certificate_to_json(const DiophantineCertificate& cert, int indent) {
  json j{{"alpha", cert.alpha},
         {"nu", cert.nu},
         {"ncut", cert.ncut},
         {"C", cert.C},
         {"worst_j", cert.worst_j}};
  return j.dump(indent);
}

std::string witness_to_json(const LiouvilleWitness& witness, int indent) {
  json j{{"N", witness.N},
         {"truncation_depth", witness.truncation_depth},
         {"beta0", witness.beta0},
         {"beta1", witness.beta1},
         {"inner_product", witness.inner_product},
         {"tail_bound", witness.tail_bound},
         {"norm_beta_squared", witness.norm_beta_squared},
         {"certified", witness.certified},
         {"norm_lower_bound_ok", witness.norm_lower_bound_ok}};
  return j.dump(indent);
}

std::string bound_certificate_to_json(const BoundCertificate& cert, int indent) {
  json samples = json::array();
  for (const auto& s : cert.samples) {
    samples.push_back(json{{"s", s.s}, {"t", s.t}, {"ratio", s.ratio}});
  }
  json j{{"order", cert.order},
         {"declared_constant", cert.declared_constant},
         {"c_emp", cert.c_emp},
         {"pass", cert.pass},
         {"samples", samples}};
  return j.dump(indent);
}

std::string report_to_csv(const ConvergenceReport& report) {
  std::ostringstream os;
  os << "# kamkit-report-csv v1\n";
  os << "n,s_n,e_n,alpha_n,envelope\n";
  char line[256];
  for (const auto& r : report.iterations) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%.17g\n", r.n,
                  r.scale, r.error, r.alpha_norm, r.envelope);
    os << line;
  }
  return os.str();
}

std::string normal_form_to_json(const NormalFormResult& result, int indent) {
  json log = json::array();
  for (const auto& [h, shift] : result.transform_log) {
    json shifts = json::array();
    for (const auto& s : shift) shifts.push_back(series_terms(s));
    log.push_back(json{{"h", series_terms(h)}, {"shift", shifts}});
  }
  json j{{"transform_log", log},
         {"final", series_terms(result.final_h)},
         {"residual", series_terms(result.residual_error)},
         {"residual_norm", result.residual_norm},
         {"frequency_drift", result.frequency_drift},
         {"report", report_json(result.report)},
         {"warnings", result.warnings}};
  return j.dump(indent);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("read_file: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("write_file: cannot open " + path);
  out << contents;
}

}  // namespace kamkit::io
