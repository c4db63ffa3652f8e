#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "snmge/convergence.h"
#include "snmge/mesh.h"
#include "snmge/moment_vector.h"

namespace snmge {

/// Writes the convergence history as CSV. Fixed-source logs get the header
/// `iter,res_norm,seconds`, eigenvalue logs `outer,k,delta_k,l2_fission,
/// linf_fission,krylov_iters,seconds`. Values are printed with %.17g so a
/// rerun with identical inputs produces byte-identical non-timing columns.
/// Throws ConfigError if the log has no rows.
void emit_convergence_csv(const ConvergenceLog& log, std::ostream& os);
void emit_convergence_csv(const ConvergenceLog& log, const std::string& path);

/// Scalar flux as text: header `g,i,j,k,flux`, one row per (group, cell),
/// group-major with cells ordered i, then j, then k. %.17g round-trips
/// doubles exactly, so read_flux recovers the written values bitwise.
void write_flux(const MomentVector& phi, const CartesianMesh& mesh, std::ostream& os);
void write_flux(const MomentVector& phi, const CartesianMesh& mesh,
                const std::string& path);

/// Reads the write_flux format back; group count is taken from the file.
MomentVector read_flux(std::istream& is, const CartesianMesh& mesh);
MomentVector read_flux(const std::string& path, const CartesianMesh& mesh);

/// %.17g rendering shared by every emitter.
std::string format_double(double v);

}  // namespace snmge
