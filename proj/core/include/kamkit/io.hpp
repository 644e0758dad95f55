// kamkit :: structured-text serialization (JSON records, CSV reports).
//
// Series records carry (fourier[], momentum[], tdeg, re, im) plus a
// header (dim, mode, trunc, real); doubles round-trip through the text
// form.  Parsing failures raise DomainError.
#ifndef KAMKIT_IO_HPP
#define KAMKIT_IO_HPP

#include <string>

#include <kamkit/arithmetic.hpp>
#include <kamkit/kam.hpp>
#include <kamkit/newton.hpp>
#include <kamkit/operators.hpp>
#include <kamkit/series.hpp>

namespace kamkit::io {

std::string series_to_json(const ScaledSeries& f, int indent = 2);
ScaledSeries series_from_json(const std::string& text);

std::string torus_hamiltonian_to_json(const TorusHamiltonian& h, int indent = 2);
TorusHamiltonian torus_hamiltonian_from_json(const std::string& text);

std::string singular_hamiltonian_to_json(const SingularHamiltonian& h,
                                         int indent = 2);
SingularHamiltonian singular_hamiltonian_from_json(const std::string& text);

std::string certificate_to_json(const DiophantineCertificate& cert,
                                int indent = 2);
std::string witness_to_json(const LiouvilleWitness& witness, int indent = 2);
std::string bound_certificate_to_json(const BoundCertificate& cert,
                                      int indent = 2);

/// CSV with a versioned header comment; columns n, s_n, e_n, alpha_n,
/// envelope.
std::string report_to_csv(const ConvergenceReport& report);

std::string normal_form_to_json(const NormalFormResult& result, int indent = 2);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace kamkit::io

#endif  // KAMKIT_IO_HPP
