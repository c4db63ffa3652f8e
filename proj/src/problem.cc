#include "snmge/problem.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "snmge/partition.h"

namespace snmge {

namespace {

struct Tok {
  std::string text;
  int line;
};

struct Section {
  std::string name;       // lowercased name inside the brackets
  std::string arg;        // remainder inside the brackets (material id)
  int header_line;
  std::vector<Tok> toks;  // payload: rest of header line plus following lines
};

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string tok;
    while (ls >> tok) {
      if (tok.front() == '[') {
        // Header: may be "[name]" or "[name id]"; the id can be a separate token.
        std::string header = tok;
        while (header.find(']') == std::string::npos && (ls >> tok)) header += " " + tok;
        if (header.find(']') == std::string::npos)
          throw ParseError(lineno, "unterminated section header");
        std::string inner = header.substr(1, header.find(']') - 1);
        std::istringstream hs(inner);
        Section s;
        hs >> s.name;
        std::getline(hs, s.arg);
        if (auto p = s.arg.find_first_not_of(' '); p != std::string::npos)
          s.arg = s.arg.substr(p);
        else
          s.arg.clear();
        s.header_line = lineno;
        std::transform(s.name.begin(), s.name.end(), s.name.begin(), ::tolower);
        sections.push_back(std::move(s));
      } else {
        if (sections.empty())
          throw ParseError(lineno, "content before any section header");
        sections.back().toks.push_back({tok, lineno});
      }
    }
  }
  return sections;
}

int to_int(const Tok& t) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(t.text, &pos);
  } catch (const std::exception&) {
    throw ParseError(t.line, "expected an integer, got '" + t.text + "'");
  }
  if (pos != t.text.size())
    throw ParseError(t.line, "expected an integer, got '" + t.text + "'");
  return v;
}

double to_double(const Tok& t) {
  size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(t.text, &pos);
  } catch (const std::exception&) {
    throw ParseError(t.line, "expected a number, got '" + t.text + "'");
  }
  if (pos != t.text.size())
    throw ParseError(t.line, "expected a number, got '" + t.text + "'");
  return v;
}

bool to_bool(const Tok& t) {
  if (t.text == "true" || t.text == "on" || t.text == "1") return true;
  if (t.text == "false" || t.text == "off" || t.text == "0") return false;
  throw ParseError(t.line, "expected true or false, got '" + t.text + "'");
}

// A key=value payload token split at the first '='.
std::pair<std::string, Tok> keyval(const Tok& t) {
  auto eq = t.text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == t.text.size())
    throw ParseError(t.line, "expected key=value, got '" + t.text + "'");
  return {t.text.substr(0, eq), {t.text.substr(eq + 1), t.line}};
}

struct MaterialEntry {
  std::string kind;  // total | scatter | nufission | chi
  int g, gp;
  double v;
  int line;
};

}  // namespace

ProblemSpec parse_problem_file(const std::string& text) {
  ProblemSpec spec;
  auto sections = split_sections(text);

  std::map<int, std::vector<MaterialEntry>> mat_entries;  // keyed by file id
  std::vector<int> mat_order;                             // declaration order
  std::vector<std::pair<Tok, Tok>> source_entries;        // (group, value)
  const Section* cells_section = nullptr;
  std::vector<std::string> seen;

  auto expect_unique = [&](const Section& s) {
    if (std::find(seen.begin(), seen.end(), s.name) != seen.end())
      throw ParseError(s.header_line, "duplicate [" + s.name + "] section");
    seen.push_back(s.name);
  };

  for (const auto& s : sections) {
    if (s.name == "mesh") {
      expect_unique(s);
      if (s.toks.size() != 6)
        throw ParseError(s.header_line, "[mesh] needs nx ny nz dx dy dz");
      spec.mesh.nx = to_int(s.toks[0]);
      spec.mesh.ny = to_int(s.toks[1]);
      spec.mesh.nz = to_int(s.toks[2]);
      spec.mesh.dx = to_double(s.toks[3]);
      spec.mesh.dy = to_double(s.toks[4]);
      spec.mesh.dz = to_double(s.toks[5]);
    } else if (s.name == "bc") {
      expect_unique(s);
      if (s.toks.size() != 6)
        throw ParseError(s.header_line, "[bc] needs six face values (xlo xhi ylo yhi zlo zhi)");
      for (int f = 0; f < 6; ++f) {
        const Tok& t = s.toks[f];
        if (t.text == "vacuum")
          spec.mesh.bc[f] = BoundaryKind::vacuum;
        else if (t.text == "reflect")
          spec.mesh.bc[f] = BoundaryKind::reflect;
        else
          throw ParseError(t.line, "boundary must be vacuum or reflect, got '" + t.text + "'");
      }
    } else if (s.name == "quadrature") {
      expect_unique(s);
      if (s.toks.size() != 1) throw ParseError(s.header_line, "[quadrature] needs one order");
      spec.quadrature_order = to_int(s.toks[0]);
    } else if (s.name == "material") {
      if (s.arg.empty()) throw ParseError(s.header_line, "[material] needs an id");
      int id = to_int({s.arg, s.header_line});
      if (mat_entries.count(id))
        throw ParseError(s.header_line, "material " + std::to_string(id) + " defined twice");
      mat_order.push_back(id);
      auto& entries = mat_entries[id];
      size_t i = 0;
      while (i < s.toks.size()) {
        const Tok& kw = s.toks[i];
        auto need = [&](size_t n) {
          if (i + n >= s.toks.size())
            throw ParseError(kw.line, "truncated '" + kw.text + "' entry");
        };
        if (kw.text == "total" || kw.text == "nufission" || kw.text == "chi") {
          need(2);
          entries.push_back({kw.text, to_int(s.toks[i + 1]), -1, to_double(s.toks[i + 2]), kw.line});
          i += 3;
        } else if (kw.text == "scatter") {
          need(3);
          entries.push_back({kw.text, to_int(s.toks[i + 1]), to_int(s.toks[i + 2]),
                             to_double(s.toks[i + 3]), kw.line});
          i += 4;
        } else {
          throw ParseError(kw.line, "unknown material entry '" + kw.text +
                                        "' (expected total, scatter, nufission, or chi)");
        }
      }
    } else if (s.name == "cells") {
      expect_unique(s);
      cells_section = &s;
    } else if (s.name == "source") {
      expect_unique(s);
      size_t i = 0;
      while (i < s.toks.size()) {
        if (s.toks[i].text != "group")
          throw ParseError(s.toks[i].line, "[source] entries are 'group g v'");
        if (i + 2 >= s.toks.size())
          throw ParseError(s.toks[i].line, "truncated source entry");
        source_entries.push_back({s.toks[i + 1], s.toks[i + 2]});
        i += 3;
      }
    } else if (s.name == "solver") {
      expect_unique(s);
      for (const auto& t : s.toks) {
        auto [key, val] = keyval(t);
        if (key == "tol")
          spec.solver.tol = to_double(val);
        else if (key == "max_iters")
          spec.solver.max_iters = to_int(val);
        else if (key == "restart")
          spec.solver.restart = to_int(val);
        else if (key == "sets")
          spec.solver.num_sets = to_int(val);
        else if (key == "block") {
          if (val.text == "all")
            spec.solver.block_mode = BlockMode::all_groups;
          else if (val.text == "upscatter")
            spec.solver.block_mode = BlockMode::upscatter_only;
          else
            throw ParseError(val.line, "block must be all or upscatter");
        } else if (key == "solver") {
          if (val.text == "gmres")
            spec.solver.kind = SolverKind::gmres;
          else if (val.text == "gs")
            spec.solver.kind = SolverKind::gauss_seidel;
          else
            throw ParseError(val.line, "solver must be gmres or gs");
        } else {
          throw ParseError(t.line, "unknown [solver] key '" + key + "'");
        }
      }
    } else if (s.name == "mge") {
      expect_unique(s);
      for (const auto& t : s.toks) {
        auto [key, val] = keyval(t);
        if (key == "enabled")
          spec.solver.precond_enabled = to_bool(val);
        else if (key == "weight")
          spec.solver.weight = to_double(val);
        else if (key == "relax")
          spec.solver.relax = to_int(val);
        else if (key == "vcycles")
          spec.solver.vcycles = to_int(val);
        else if (key == "depth") {
          if (val.text == "auto")
            spec.solver.depth.reset();
          else
            spec.solver.depth = to_int(val);
        } else if (key == "sn") {
          if (val.text == "same")
            spec.solver.pc_order.reset();
          else
            spec.solver.pc_order = to_int(val);
        } else {
          throw ParseError(t.line, "unknown [mge] key '" + key + "'");
        }
      }
    } else if (s.name == "eigen") {
      expect_unique(s);
      for (const auto& t : s.toks) {
        auto [key, val] = keyval(t);
        if (key == "enabled")
          spec.eigen.enabled = to_bool(val);
        else if (key == "ktol")
          spec.eigen.k_tol = to_double(val);
        else if (key == "k0")
          spec.eigen.k0 = to_double(val);
        else if (key == "l2tol")
          spec.eigen.l2_tol = to_double(val);
        else if (key == "linftol")
          spec.eigen.linf_tol = to_double(val);
        else if (key == "max_outer")
          spec.eigen.max_outer = to_int(val);
        else
          throw ParseError(t.line, "unknown [eigen] key '" + key + "'");
      }
    } else {
      throw ParseError(s.header_line, "unknown section [" + s.name + "]");
    }
  }

  if (mat_order.empty()) throw ParseError(1, "no [material] sections defined");

  // The group count is the largest group index mentioned anywhere, plus one.
  int num_groups = 0;
  for (const auto& [id, entries] : mat_entries) {
    for (const auto& e : entries) {
      if (e.g < 0 || (e.kind == "scatter" && e.gp < 0))
        throw ParseError(e.line, "negative group index");
      num_groups = std::max(num_groups, e.g + 1);
      if (e.kind == "scatter") num_groups = std::max(num_groups, e.gp + 1);
    }
  }
  for (const auto& [g_tok, v_tok] : source_entries)
    num_groups = std::max(num_groups, to_int(g_tok) + 1);
  if (num_groups == 0) throw ParseError(1, "no group data in any material");
  spec.num_groups = num_groups;

  // Assemble materials in declaration order; duplicates of one entry are errors.
  std::map<int, int> id_to_index;
  for (int id : mat_order) {
    MaterialCrossSections m;
    m.sigma_t.assign(num_groups, 0.0);
    m.sigma_s.assign(num_groups, Vec(num_groups, 0.0));
    m.nu_sigma_f.assign(num_groups, 0.0);
    m.chi.assign(num_groups, 0.0);
    std::vector<std::string> filled;
    for (const auto& e : mat_entries[id]) {
      std::string slot = e.kind + ":" + std::to_string(e.g) +
                         (e.kind == "scatter" ? "," + std::to_string(e.gp) : "");
      if (std::find(filled.begin(), filled.end(), slot) != filled.end())
        throw ParseError(e.line, "duplicate " + e.kind + " entry in material " +
                                     std::to_string(id));
      filled.push_back(slot);
      if (e.kind == "total")
        m.sigma_t[e.g] = e.v;
      else if (e.kind == "scatter")
        m.sigma_s[e.g][e.gp] = e.v;
      else if (e.kind == "nufission")
        m.nu_sigma_f[e.g] = e.v;
      else
        m.chi[e.g] = e.v;
    }
    id_to_index[id] = static_cast<int>(spec.materials.size());
    spec.materials.push_back(std::move(m));
  }

  // Cell map.
  const int ncells = spec.mesh.num_cells();
  if (cells_section) {
    const auto& toks = cells_section->toks;
    if (!toks.empty() && toks[0].text == "fill") {
      if (toks.size() != 2) throw ParseError(toks[0].line, "[cells] fill needs one id");
      int id = to_int(toks[1]);
      if (!id_to_index.count(id))
        throw ParseError(toks[1].line, "unknown material " + std::to_string(id));
      spec.mesh.material_id.assign(ncells, id_to_index[id]);
    } else {
      spec.mesh.material_id.assign(ncells, -1);
      size_t i = 0;
      while (i < toks.size()) {
        if (toks[i].text != "cell")
          throw ParseError(toks[i].line, "[cells] entries are 'fill id' or 'cell i j k id'");
        if (i + 4 >= toks.size()) throw ParseError(toks[i].line, "truncated cell entry");
        int ci = to_int(toks[i + 1]), cj = to_int(toks[i + 2]), ck = to_int(toks[i + 3]);
        int id = to_int(toks[i + 4]);
        if (ci < 0 || ci >= spec.mesh.nx || cj < 0 || cj >= spec.mesh.ny || ck < 0 ||
            ck >= spec.mesh.nz)
          throw ParseError(toks[i].line, "cell index out of range");
        if (!id_to_index.count(id))
          throw ParseError(toks[i + 4].line, "unknown material " + std::to_string(id));
        spec.mesh.material_id[spec.mesh.cell_index(ci, cj, ck)] = id_to_index[id];
        i += 5;
      }
      for (int c = 0; c < ncells; ++c)
        if (spec.mesh.material_id[c] < 0)
          throw ParseError(cells_section->header_line,
                           "[cells] does not assign a material to every cell");
    }
  } else if (spec.materials.size() == 1) {
    spec.mesh.material_id.assign(ncells, 0);
  } else {
    throw ParseError(1, "multiple materials defined but no [cells] section");
  }

  // Source strengths.
  spec.source.group_strength.assign(num_groups, 0.0);
  for (const auto& [g_tok, v_tok] : source_entries) {
    int g = to_int(g_tok);
    double v = to_double(v_tok);
    if (v < 0.0) throw ParseError(v_tok.line, "source strength must be >= 0");
    spec.source.group_strength[g] = v;
  }

  try {
    validate_problem(spec);
  } catch (const ParseError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ParseError(1, e.what());
  }
  return spec;
}

void validate_problem(const ProblemSpec& spec) {
  if (spec.num_groups < 1) throw ConfigError("problem needs at least one group");
  if (spec.mesh.nx < 1 || spec.mesh.ny < 1 || spec.mesh.nz < 1)
    throw ConfigError("mesh dimensions must be at least 1");
  if (!(spec.mesh.dx > 0) || !(spec.mesh.dy > 0) || !(spec.mesh.dz > 0))
    throw ConfigError("cell widths must be positive");
  if (spec.quadrature_order != 2 && spec.quadrature_order != 4 &&
      spec.quadrature_order != 6 && spec.quadrature_order != 8)
    throw ConfigError("quadrature order must be one of 2, 4, 6, 8");
  if (spec.materials.empty()) throw ConfigError("no materials defined");

  for (size_t m = 0; m < spec.materials.size(); ++m) {
    if (spec.materials[m].num_groups() != spec.num_groups)
      throw ConfigError("material " + std::to_string(m) + " has wrong group count");
    auto violations = validate_material(spec.materials[m]);
    if (!violations.empty())
      throw ConfigError("material " + std::to_string(m) + ": " + violations[0].message);
  }

  if (static_cast<int>(spec.mesh.material_id.size()) != spec.mesh.num_cells())
    throw ConfigError("cell material map does not cover the mesh");
  for (int id : spec.mesh.material_id)
    if (id < 0 || id >= static_cast<int>(spec.materials.size()))
      throw ConfigError("cell references an unknown material");

  if (static_cast<int>(spec.source.group_strength.size()) != spec.num_groups)
    throw ConfigError("source strength list does not match the group count");
  for (double v : spec.source.group_strength)
    if (v < 0.0 || !std::isfinite(v)) throw ConfigError("source strengths must be >= 0");

  const SolverConfig& sc = spec.solver;
  if (!(sc.tol > 0)) throw ConfigError("tol must be positive");
  if (sc.max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (sc.restart < 0) throw ConfigError("restart must be >= 0");
  if (sc.num_sets < 1) throw ConfigError("sets must be at least 1");
  if (!std::isfinite(sc.weight)) throw ConfigError("weight must be finite");
  if (sc.relax < 1) throw ConfigError("relax must be at least 1");
  if (sc.vcycles < 1) throw ConfigError("vcycles must be at least 1");
  if (sc.depth && *sc.depth < 1) throw ConfigError("depth must be at least 1");

  if (sc.pc_order) {
    if (*sc.pc_order != 2 && *sc.pc_order != 4 && *sc.pc_order != 6 && *sc.pc_order != 8)
      throw ConfigError("preconditioner quadrature order must be one of 2, 4, 6, 8");
    if (spec.mesh.any_reflecting())
      throw ConfigError(
          "a reduced preconditioner quadrature requires vacuum boundaries on every "
          "face (reflected ordinates have no counterpart in the reduced set)");
  }

  if (sc.precond_enabled && sc.kind == SolverKind::gauss_seidel)
    throw ConfigError("the multigrid preconditioner applies to the gmres solver only");

  const EigenConfig& ec = spec.eigen;
  if (!(ec.k_tol > 0) || !(ec.l2_tol > 0) || !(ec.linf_tol > 0))
    throw ConfigError("eigen tolerances must be positive");
  if (!(ec.k0 > 0)) throw ConfigError("k0 must be positive");
  if (ec.max_outer < 1) throw ConfigError("max_outer must be at least 1");
  if (ec.enabled) {
    if (spec.solver.kind == SolverKind::gauss_seidel)
      throw ConfigError("eigenvalue solves use the gmres solver");
    bool any_fission = false;
    for (const auto& m : spec.materials) any_fission = any_fission || m.fissioning();
    if (!any_fission)
      throw ConfigError("eigenvalue solve requested but no material has fission data");
  }

  if (sc.kind == SolverKind::gmres) {
    GroupRange block{0, spec.num_groups};
    if (sc.block_mode == BlockMode::upscatter_only)
      block = partition_upscatter(spec.materials).block;
    if (sc.num_sets > std::max(1, block.size()))
      throw ConfigError("sets=" + std::to_string(sc.num_sets) +
                        " exceeds the Krylov block size of " + std::to_string(block.size()));
  }
}

std::string fixture_problem_text(const FixtureOptions& opt) {
  const MaterialCrossSections m =
      opt.fission ? synth_fission_fixture(opt.num_groups, opt.num_upscatter)
                  : synth_upscatter_fixture(opt.num_groups, opt.num_upscatter);
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  std::ostringstream out;
  out << "# synthetic multigroup fixture\n";
  out << "[mesh] " << opt.n << " " << opt.n << " " << opt.n << " " << num(opt.width)
      << " " << num(opt.width) << " " << num(opt.width) << "\n";
  const char* bc = opt.reflecting ? "reflect" : "vacuum";
  out << "[bc] " << bc << " " << bc << " " << bc << " " << bc << " " << bc << " " << bc
      << "\n";
  out << "[quadrature] " << opt.quadrature_order << "\n";
  out << "[material 0]\n";
  for (int g = 0; g < opt.num_groups; ++g)
    out << "  total " << g << " " << num(m.sigma_t[g]) << "\n";
  for (int g = 0; g < opt.num_groups; ++g)
    for (int gp = 0; gp < opt.num_groups; ++gp)
      if (m.sigma_s[g][gp] != 0.0)
        out << "  scatter " << g << " " << gp << " " << num(m.sigma_s[g][gp]) << "\n";
  if (opt.fission) {
    for (int g = 0; g < opt.num_groups; ++g)
      if (m.nu_sigma_f[g] != 0.0)
        out << "  nufission " << g << " " << num(m.nu_sigma_f[g]) << "\n";
    for (int g = 0; g < opt.num_groups; ++g)
      if (m.chi[g] != 0.0) out << "  chi " << g << " " << num(m.chi[g]) << "\n";
  }
  out << "[cells] fill 0\n";
  if (!opt.fission && opt.source_groups > 0) {
    out << "[source]";
    for (int g = 0; g < std::min(opt.source_groups, opt.num_groups); ++g)
      out << " group " << g << " 1.0";
    out << "\n";
  }
  if (!opt.solver_line.empty()) out << "[solver] " << opt.solver_line << "\n";
  if (!opt.mge_line.empty()) out << "[mge] " << opt.mge_line << "\n";
  if (opt.fission) out << "[eigen] enabled=true\n";
  return out.str();
}

}  // namespace snmge
