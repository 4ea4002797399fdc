// Command line front end.  Reads geometry / lattice / gram files (text or
// the JSON mirror), runs the requested analysis and prints a run report
// whose stdout is deterministic for identical inputs and seeds; timing
// goes to stderr.  Exit codes: 0 every check passed, 1 at least one check
// failed, 2 the input could not be parsed or validated.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "plg/bits.hpp"
#include "plg/coordinatize.hpp"
#include "plg/corpus.hpp"
#include "plg/error.hpp"
#include "plg/field.hpp"
#include "plg/geometry.hpp"
#include "plg/hermitian.hpp"
#include "plg/io.hpp"
#include "plg/lattice.hpp"
#include "plg/matrix.hpp"
#include "plg/ortho.hpp"

namespace {

using nlohmann::json;
using plg::GeoFile;
using plg::LatFile;

const char* errc_name(plg::Errc c) {
  switch (c) {
    case plg::Errc::invalid_input: return "invalid-input";
    case plg::Errc::precondition: return "precondition";
    case plg::Errc::cap_exceeded: return "cap-exceeded";
    case plg::Errc::construction_failure: return "construction-failure";
    case plg::Errc::oracle_inconsistent: return "oracle-inconsistent";
    case plg::Errc::internal: return "internal";
  }
  return "unknown";
}

std::string tuple_str(const std::vector<int>& t) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ")";
  return os.str();
}

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string witness;  // printed only on failure
};

// Accumulates everything a subcommand prints: an optional payload (tables,
// component listings, the reconstructed form), then one line per check.
struct Run {
  std::string command;
  std::string digest;
  std::string payload;
  json jpayload = json::object();
  std::vector<CheckLine> checks;

  void add(const std::string& name, bool pass, const std::string& witness = "") {
    checks.push_back({name, pass, pass ? "" : witness});
  }
  void add(const std::string& name, const plg::PredFlag& f) {
    add(name, f.holds, "witness " + tuple_str(f.witness));
  }
  void note(const std::string& line) { payload += "note: " + line + "\n"; }
  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

int emit(const Run& run, bool as_json, double elapsed_ms) {
  if (as_json) {
    json out = run.jpayload;
    out["command"] = run.command;
    out["input"] = run.digest;
    out["checks"] = json::array();
    for (const auto& c : run.checks) {
      json jc;
      jc["name"] = c.name;
      jc["pass"] = c.pass;
      if (!c.witness.empty()) jc["witness"] = c.witness;
      out["checks"].push_back(jc);
    }
    out["result"] = run.passed() ? "pass" : "fail";
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "command: " << run.command << "\n";
    std::cout << "input: fnv1a=" << run.digest << "\n";
    std::cout << run.payload;
    for (const auto& c : run.checks) {
      std::cout << "check " << c.name << ": " << (c.pass ? "pass" : "fail")
                << "\n";
      if (!c.witness.empty())
        std::cout << "witness " << c.name << ": " << c.witness << "\n";
    }
    std::cout << "result: " << (run.passed() ? "pass" : "fail") << "\n";
  }
  std::fprintf(stderr, "elapsed_ms: %.3f\n", elapsed_ms);
  return run.passed() ? 0 : 1;
}

std::string read_input(const std::string& path) {
  std::ostringstream os;
  if (path == "-") {
    os << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) plg::fail(plg::Errc::invalid_input, "cannot open '" + path + "'");
    os << in.rdbuf();
  }
  return os.str();
}

// True when the bytes describe a lattice file: token `elements` first, or
// a JSON object carrying an "elements" field.
bool lattice_input(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string first;
  if (!(in >> first)) return false;
  if (first[0] == '{') {
    json j = json::parse(bytes, nullptr, /*allow_exceptions=*/false);
    return j.is_object() && j.contains("elements");
  }
  return first == "elements";
}

// ---- gen ----------------------------------------------------------------

struct GenObject {
  std::optional<GeoFile> geo;
  std::optional<LatFile> lat;
};

GenObject generate(const std::string& spec) {
  std::string name = spec;
  std::vector<int> args;
  auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')')
      plg::fail(plg::Errc::invalid_input, "spec '" + spec + "': missing ')'");
    name = spec.substr(0, open);
    std::string inner = spec.substr(open + 1, spec.size() - open - 2);
    std::istringstream in(inner);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        while (used < tok.size() && std::isspace((unsigned char)tok[used]))
          ++used;
        if (used != tok.size()) throw std::invalid_argument(tok);
        args.push_back(v);
      } catch (const std::exception&) {
        plg::fail(plg::Errc::invalid_input,
                  "spec '" + spec + "': bad argument '" + tok + "'");
      }
    }
  }
  auto need = [&](std::size_t k) {
    if (args.size() != k)
      plg::fail(plg::Errc::invalid_input,
                "spec '" + name + "' takes " + std::to_string(k) +
                    " argument(s), got " + std::to_string(args.size()));
  };
  GenObject out;
  if (name == "fano") {
    need(0);
    out.geo = GeoFile{plg::fano(), {}};
  } else if (name == "pg") {
    need(2);
    out.geo = GeoFile{plg::pg(args[0], args[1]), {}};
  } else if (name == "discrete") {
    need(1);
    out.geo = GeoFile{plg::discrete(args[0]), {}};
  } else if (name == "line") {
    need(1);
    out.geo = GeoFile{plg::line(args[0]), {}};
  } else if (name == "hall9") {
    need(0);
    out.geo = GeoFile{plg::hall9(), {}};
  } else if (name == "mo") {
    need(1);
    plg::OrthoGeometry og = plg::mo(args[0]);
    out.geo = GeoFile{og.geom(), og.ortho_pairs()};
  } else if (name == "boolean") {
    need(1);
    plg::OrthoGeometry og = plg::boolean(args[0]);
    out.geo = GeoFile{og.geom(), og.ortho_pairs()};
  } else if (name == "benzene") {
    need(0);
    plg::OrthoLattice ol = plg::benzene();
    out.lat = LatFile{ol.lat, ol.perp};
  } else {
    plg::fail(plg::Errc::invalid_input, "unknown object '" + name +
                                            "'; known: fano, pg(d,p), "
                                            "discrete(n), line(n), mo(n), "
                                            "boolean(n), benzene, hall9");
  }
  return out;
}

// ---- subcommand bodies ----------------------------------------------------

void cmd_check(const GeoFile& f, Run& run) {
  run.payload += "points: " + std::to_string(f.geom.n_points()) + "\n";
  run.payload += "lines: " + std::to_string(f.geom.lines().size()) + "\n";
  run.jpayload["points"] = f.geom.n_points();
  run.jpayload["lines-count"] = f.geom.lines().size();
  plg::GeoAxiomReport rep = plg::check_axioms(f.geom);
  std::string w = tuple_str(rep.witness) +
                  (rep.detail.empty() ? "" : "; " + rep.detail);
  // The report carries one witness, belonging to the first failed axiom.
  bool used = false;
  auto attach = [&](bool ok) {
    if (ok || used) return std::string();
    used = true;
    return w;
  };
  run.add("G1", rep.g1, attach(rep.g1));
  run.add("G2", rep.g2, attach(rep.g2));
  run.add("G3", rep.g3, attach(rep.g3));
  run.add("derived-symmetry", rep.symmetric, attach(rep.symmetric));
}

void cmd_lattice(const GeoFile& f, Run& run, std::int64_t cap) {
  plg::SubspaceLattice sl = plg::from_geometry(f.geom, cap);
  run.payload += "elements: " + std::to_string(sl.lat.n) + "\n";
  run.payload += "atoms: " + std::to_string(sl.lat.atoms.size()) + "\n";
  run.jpayload["elements"] = sl.lat.n;
  run.jpayload["atoms"] = sl.lat.atoms.size();
  plg::LatPredicates pr = plg::predicates(sl.lat);
  if (!pr.note.empty()) run.note(pr.note);
  run.add("atomistic", pr.atomistic);
  run.add("modular", pr.modular);
  run.add("upper-semimodular", pr.upper_semimodular);
  run.add("lower-semimodular", pr.lower_semimodular);
  run.add("covering-law", pr.covering_law);
  run.add("intersection-property", pr.intersection_property);
  run.add("atoms-compact", pr.atoms_compact);
}

void cmd_decompose(const GeoFile& f, Run& run, std::int64_t cap) {
  auto comps = plg::irreducible_components(f.geom);
  run.payload += "components: " + std::to_string(comps.size()) + "\n";
  run.jpayload["components"] = json::array();
  for (std::size_t k = 0; k < comps.size(); ++k) {
    std::string row;
    for (int p : comps[k]) row += (row.empty() ? "" : " ") + std::to_string(p);
    run.payload += "component " + std::to_string(k) + ": " + row + "\n";
    run.jpayload["components"].push_back(comps[k]);
  }

  // Every point must land in exactly one class.
  std::vector<int> cls(f.geom.n_points(), -1);
  bool partition = true;
  for (std::size_t k = 0; k < comps.size(); ++k)
    for (int p : comps[k]) {
      if (p < 0 || p >= f.geom.n_points() || cls[p] != -1) partition = false;
      else cls[p] = static_cast<int>(k);
    }
  for (int c : cls) partition = partition && c != -1;
  run.add("partition", partition);

  // Rebuilding the coproduct of the components recovers the input.
  std::vector<plg::Geometry> parts;
  std::vector<std::vector<int>> gol(comps.size());
  for (std::size_t k = 0; k < comps.size(); ++k)
    parts.push_back(plg::component_geometry(f.geom, comps[k], &gol[k]));
  plg::CoproductResult cop = plg::coproduct(parts);
  std::vector<int> map(f.geom.n_points(), -1);
  for (std::size_t k = 0; k < comps.size(); ++k)
    for (std::size_t l = 0; l < gol[k].size(); ++l)
      map[cop.offsets[k] + l] = gol[k][l];
  plg::GeoMorphism iso{cop.geom, f.geom, plg::Bits(cop.geom.n_points()), map};
  run.add("coproduct-rebuild", plg::is_isomorphism(iso));

  if (f.has_ortho()) {
    plg::OrthoGeometry og(f.geom, f.ortho);
    plg::ComponentsReport hc = plg::hilbert_components(og, cap);
    run.add("orthogonal-split", hc.cls == cls,
            "orthogonality classes disagree with the incidence classes");
  }
}

void cmd_desargues(const GeoFile& f, Run& run) {
  plg::DesarguesReport rep = plg::desargues_holds(f.geom);
  std::string w;
  if (!rep.holds) {
    w = "config " + tuple_str(rep.config) + " diagonals " +
        tuple_str(rep.diagonals);
    if (!rep.detail.empty()) w += "; " + rep.detail;
    run.jpayload["config"] = rep.config;
    run.jpayload["diagonals"] = rep.diagonals;
  }
  run.add("desargues", rep.holds, w);
}

std::string grid_str(const std::vector<std::vector<int>>& t) {
  std::string out;
  for (const auto& row : t) {
    std::string r;
    for (int v : row) r += (r.empty() ? "" : " ") + std::to_string(v);
    out += r + "\n";
  }
  return out;
}

void cmd_coordinatize(const GeoFile& f, Run& run, std::uint64_t seed) {
  plg::CoordModel m = plg::coordinatize(f.geom, seed);
  run.payload += "field_order " + std::to_string(m.field_order) + "\n";
  run.payload += "dim " + std::to_string(m.vspace_dim) + "\n";
  run.payload += "add\n" + grid_str(m.add_table);
  run.payload += "mul\n" + grid_str(m.mul_table);
  run.payload += "coords\n";
  for (std::size_t p = 0; p < m.coords.size(); ++p)
    run.payload +=
        "point " + std::to_string(p) + " -> " + tuple_str(m.coords[p]) + "\n";
  run.jpayload["field_order"] = m.field_order;
  run.jpayload["dim"] = m.vspace_dim;
  run.jpayload["add"] = m.add_table;
  run.jpayload["mul"] = m.mul_table;
  run.jpayload["coords"] = m.coords;
  run.add("coordinatize", true);

  plg::FieldMatch fm = plg::identify_field(m);
  if (fm.iso) {
    run.payload += "field: GF(" + std::to_string(m.field_order) + ")\n";
    run.jpayload["field"] = "GF(" + std::to_string(m.field_order) + ")";
  } else if (!fm.note.empty()) {
    run.note(fm.note);
  }
}

void cmd_ortho_check(const GeoFile& f, Run& run, std::int64_t cap) {
  plg::OrthoGeometry og(f.geom, f.ortho);
  run.payload += "points: " + std::to_string(f.geom.n_points()) + "\n";
  run.payload += "ortho-pairs: " + std::to_string(f.ortho.size()) + "\n";
  run.jpayload["points"] = f.geom.n_points();
  run.jpayload["ortho-pairs"] = f.ortho.size();
  plg::OrthoAxiomReport rep = plg::check_ortho_axioms(og, cap);
  run.add("O1-irreflexive", rep.o1);
  run.add("O2-symmetric", rep.o2);
  run.add("O3-perp-is-subspace", rep.o3);
  run.add("O4-orthogonal-on-lines", rep.o4);
  run.add("O5-closed-splits", rep.o5);
  auto describe = [](const plg::PredFlag& p) {
    return p.holds ? std::string("holds")
                   : "fails at " + tuple_str(p.witness);
  };
  run.note("O6 cross-check: " + describe(rep.o6));
  run.note("O7 cross-check: " + describe(rep.o7));
  run.note("state-space cross-check: " + describe(rep.state_space));
  if (!rep.detail.empty()) run.note(rep.detail);
}

void report_prop_system(const plg::PropSystem& sys, Run& run) {
  plg::PropSystemReport rep = plg::check_prop_system(sys);
  if (!rep.note.empty()) run.note(rep.note);
  run.add("orthocomplementation", rep.orthocomplementation);
  run.add("orthomodular", rep.orthomodular);
  run.add("atomistic", rep.atomistic);
  run.add("covering-law", rep.covering_law);
}

void cmd_propsys_lat(const LatFile& lf, Run& run) {
  run.payload += "elements: " + std::to_string(lf.lat.n) + "\n";
  run.jpayload["elements"] = lf.lat.n;
  report_prop_system(plg::PropSystem{lf.lat, lf.perp}, run);
}

void cmd_propsys_geo(const GeoFile& f, Run& run, std::int64_t cap) {
  plg::OrthoGeometry og(f.geom, f.ortho);
  plg::OrthoLattice ol = plg::to_ortho_lattice(og, cap);
  plg::ClosedElements ce = plg::closed_elements(ol);
  run.payload += "subspaces: " + std::to_string(ol.lat.n) + "\n";
  run.payload += "closed: " + std::to_string(ce.sys.lat.n) + "\n";
  run.jpayload["subspaces"] = ol.lat.n;
  run.jpayload["closed"] = ce.sys.lat.n;
  report_prop_system(ce.sys, run);
}

void add_triple(const plg::TripleReport& tr, Run& run) {
  run.add("order-equivalence", tr.order_ok, tr.detail);
  run.add("ortho-equivalence", tr.ortho_ok, tr.detail);
}

void cmd_roundtrip_geo(const GeoFile& f, Run& run, std::int64_t cap) {
  plg::AlphaResult a = plg::alpha_iso(f.geom, cap);
  run.add("geometry-lattice-geometry", a.verified);
  plg::SubspaceLattice sl = plg::from_geometry(f.geom, cap);
  plg::BetaResult b = plg::beta_iso(sl.lat);
  run.add("lattice-geometry-lattice", b.verified);
  if (f.has_ortho())
    add_triple(plg::triple_round_trip(plg::OrthoGeometry(f.geom, f.ortho), cap),
               run);
}

void cmd_roundtrip_lat(const LatFile& lf, Run& run, std::int64_t cap) {
  plg::BetaResult b = plg::beta_iso(lf.lat);
  run.add("lattice-geometry-lattice", b.verified);
  if (lf.has_perp())
    add_triple(plg::triple_round_trip(plg::OrthoLattice{lf.lat, lf.perp}, cap),
               run);
}

void cmd_reconstruct(const plg::HermitianSpace& h, Run& run,
                     std::uint64_t seed) {
  plg::FormAxiomReport far = plg::check_form(h);
  if (!far.note.empty()) run.note(far.note);
  run.add("first-argument-linearity", far.s1);
  run.add("form-symmetry", far.s2);
  run.add("orthomodular-splitting", far.s3);
  std::string w;
  if (far.isotropic_witness) {
    std::string v;
    for (const auto& s : *far.isotropic_witness)
      v += (v.empty() ? "" : ",") + s.str();
    w = "isotropic vector (" + v + ")";
  }
  run.add("anisotropy", far.s4, w);
  if (!far.ok()) return;

  // Reconstruct from the orthogonality relation alone, then confirm the
  // result is the source form up to one nonzero scalar.
  const plg::Matrix& g = h.gram;
  auto oracle = [&g](const std::vector<plg::Scalar>& x,
                     const std::vector<plg::Scalar>& y) {
    std::vector<plg::Scalar> gy = plg::mat_vec(g, y);
    plg::Scalar acc = plg::Scalar::zero(g.field());
    for (std::size_t i = 0; i < x.size(); ++i) acc = acc + x[i] * gy[i];
    return acc.is_zero();
  };
  plg::FormReport rep = plg::piron_reconstruct(h.dim, oracle, seed);
  run.payload += plg::write_gram(rep.form);
  run.payload += "involution: " + rep.involution + "\n";
  std::optional<plg::Scalar> lam = plg::form_uniqueness(rep.form, g);
  bool prop = lam.has_value() && !lam->is_zero();
  if (prop) run.payload += "scale: " + lam->str() + "\n";
  run.jpayload["dim"] = rep.form.rows();
  run.jpayload["rows"] = json::array();
  for (int r = 0; r < rep.form.rows(); ++r) {
    std::vector<std::string> row;
    for (int c = 0; c < rep.form.cols(); ++c)
      row.push_back(rep.form.at(r, c).str());
    run.jpayload["rows"].push_back(row);
  }
  run.jpayload["involution"] = rep.involution;
  if (prop) run.jpayload["scale"] = lam->str();
  run.add("reconstruction-proportional", prop,
          "reconstructed form is not a scalar multiple of the source");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "finite projective geometries, orthomodular lattices and "
      "quantum-logic form reconstruction"};
  app.require_subcommand(1);

  std::string path, format = "text", spec;
  std::int64_t cap = 100000;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* s, bool with_cap, bool with_seed) {
    s->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "json"}));
    if (with_cap)
      s->add_option("--cap", cap, "subspace enumeration cap (default 100000)");
    if (with_seed)
      s->add_option("--seed", seed, "seed for randomized choices (default 0)");
  };
  auto add_file = [&](CLI::App* s) {
    s->add_option("file", path, "input file, or '-' for stdin")->required();
  };

  CLI::App* c;
  c = app.add_subcommand("gen", "write a named example object");
  c->add_option("spec", spec,
                "fano | pg(d,p) | discrete(n) | line(n) | mo(n) | boolean(n) "
                "| benzene | hall9")
      ->required();
  add_common(c, false, false);

  c = app.add_subcommand("check", "verify the geometry axioms");
  add_file(c);
  add_common(c, false, false);

  c = app.add_subcommand("lattice",
                         "build the subspace lattice and decide its predicates");
  add_file(c);
  add_common(c, true, false);

  c = app.add_subcommand("decompose",
                         "split into irreducible components and verify the "
                         "coproduct rebuild");
  add_file(c);
  add_common(c, true, false);

  c = app.add_subcommand("desargues", "search for a failing Desargues configuration");
  add_file(c);
  add_common(c, false, false);

  c = app.add_subcommand("coordinatize",
                         "recover field tables and homogeneous coordinates");
  add_file(c);
  add_common(c, false, true);

  c = app.add_subcommand("ortho-check", "verify the orthogonality axioms");
  add_file(c);
  add_common(c, true, false);

  c = app.add_subcommand("propsys",
                         "check the propositional-system axioms (lattice+perp "
                         "file, or closed subspaces of a geometry)");
  add_file(c);
  add_common(c, true, false);

  c = app.add_subcommand("roundtrip",
                         "verify the geometry/lattice/system equivalences");
  add_file(c);
  add_common(c, true, false);

  c = app.add_subcommand("reconstruct-form",
                         "rebuild the form from its orthogonality relation");
  add_file(c);
  add_common(c, false, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const bool as_json = format == "json";

  try {
    if (cmd == "gen") {
      GenObject obj = generate(spec);
      if (obj.geo)
        std::cout << (as_json ? plg::write_geometry_json(*obj.geo)
                              : plg::write_geometry(*obj.geo));
      else
        std::cout << (as_json ? plg::write_lattice_json(*obj.lat)
                              : plg::write_lattice(*obj.lat));
      return 0;
    }

    const std::string bytes = read_input(path);
    Run run;
    run.command = cmd;
    run.digest = plg::fnv1a_hex(bytes);
    const auto t0 = std::chrono::steady_clock::now();

    // Parsing failures (and gram symmetry validation) exit 2; once the
    // input is loaded, errors thrown by the analysis are reported as a
    // failed check with the error class as witness.
    auto guarded = [&](auto&& body) {
      try {
        body();
      } catch (const plg::Error& e) {
        run.add(cmd, false, std::string(errc_name(e.code())) + ": " + e.what());
      }
    };

    if (cmd == "propsys" || cmd == "roundtrip") {
      if (lattice_input(bytes)) {
        LatFile lf = plg::parse_lattice(bytes);
        if (cmd == "propsys" && !lf.has_perp())
          plg::fail(plg::Errc::invalid_input,
                    "propsys needs a perp map ('perp i j' lines)");
        guarded([&] {
          cmd == "propsys" ? cmd_propsys_lat(lf, run)
                           : cmd_roundtrip_lat(lf, run, cap);
        });
      } else {
        GeoFile f = plg::parse_geometry(bytes);
        guarded([&] {
          cmd == "propsys" ? cmd_propsys_geo(f, run, cap)
                           : cmd_roundtrip_geo(f, run, cap);
        });
      }
    } else if (cmd == "reconstruct-form") {
      plg::HermitianSpace h = plg::make_space(plg::parse_gram(bytes));
      guarded([&] { cmd_reconstruct(h, run, seed); });
    } else {
      GeoFile f = plg::parse_geometry(bytes);
      guarded([&] {
        if (cmd == "check") cmd_check(f, run);
        else if (cmd == "lattice") cmd_lattice(f, run, cap);
        else if (cmd == "decompose") cmd_decompose(f, run, cap);
        else if (cmd == "desargues") cmd_desargues(f, run);
        else if (cmd == "coordinatize") cmd_coordinatize(f, run, seed);
        else cmd_ortho_check(f, run, cap);
      });
    }

    const double ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    return emit(run, as_json, ms);
  } catch (const plg::Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
}
