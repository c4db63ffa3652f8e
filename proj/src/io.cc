#include "snmge/io.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "snmge/types.h"

namespace snmge {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_convergence_csv(const ConvergenceLog& log, std::ostream& os) {
  if (log.iterations.empty() && log.outers.empty())
    throw ConfigError("refusing to write an empty convergence record");
  if (!log.outers.empty()) {
    os << "outer,k,delta_k,l2_fission,linf_fission,krylov_iters,seconds\n";
    for (const auto& r : log.outers)
      os << r.outer << ',' << format_double(r.k) << ',' << format_double(r.delta_k)
         << ',' << format_double(r.l2_fission) << ',' << format_double(r.linf_fission)
         << ',' << r.krylov_iters << ',' << format_double(r.seconds) << '\n';
    return;
  }
  os << "iter,res_norm,seconds\n";
  for (const auto& r : log.iterations)
    os << r.iter << ',' << format_double(r.res_norm) << ','
       << format_double(r.seconds) << '\n';
}

void emit_convergence_csv(const ConvergenceLog& log, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  emit_convergence_csv(log, f);
}

void write_flux(const MomentVector& phi, const CartesianMesh& mesh, std::ostream& os) {
  os << "g,i,j,k,flux\n";
  const int ng = phi.groups.size();
  for (int g = 0; g < ng; ++g)
    for (int i = 0; i < mesh.nx; ++i)
      for (int j = 0; j < mesh.ny; ++j)
        for (int k = 0; k < mesh.nz; ++k)
          os << (phi.groups.begin + g) << ',' << i << ',' << j << ',' << k << ','
             << format_double(phi.at(g, mesh.cell_index(i, j, k))) << '\n';
}

void write_flux(const MomentVector& phi, const CartesianMesh& mesh,
                const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  write_flux(phi, mesh, f);
}

MomentVector read_flux(std::istream& is, const CartesianMesh& mesh) {
  std::string line;
  if (!std::getline(is, line) || line != "g,i,j,k,flux")
    throw ConfigError("flux file is missing the g,i,j,k,flux header");

  struct Row { int g, i, j, k; double v; };
  std::vector<Row> rows;
  int max_g = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Row r;
    std::istringstream ss(line);
    char c;
    if (!(ss >> r.g >> c >> r.i >> c >> r.j >> c >> r.k >> c >> r.v))
      throw ConfigError("malformed flux row: " + line);
    rows.push_back(r);
    max_g = std::max(max_g, r.g);
  }
  const int ng = max_g + 1;
  if (static_cast<long long>(rows.size()) !=
      static_cast<long long>(ng) * mesh.num_cells())
    throw ConfigError("flux file does not cover every group-cell pair");

  MomentVector phi(GroupRange{0, ng}, mesh.num_cells());
  for (const Row& r : rows) phi.at(r.g, mesh.cell_index(r.i, r.j, r.k)) = r.v;
  return phi;
}

MomentVector read_flux(const std::string& path, const CartesianMesh& mesh) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read " + path);
  return read_flux(f, mesh);
}

}  // namespace snmge
