// stratcoh: batch front end for the poset, strat and gen operations.
//
//   stratcoh poset mobius FILE --x 0 --y top
//   stratcoh strat ss FILE --ring Q --pages 3
//   stratcoh gen config --n 3 --space plane > model.json
//
// Output goes to stdout; diagnostics to stderr. Exit status: 0 success,
// 1 domain or validation failure, 2 usage or document errors.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stratcoh/error.hpp"
#include "stratcoh/generators.hpp"
#include "stratcoh/io.hpp"
#include "stratcoh/poset.hpp"
#include "stratcoh/specseq.hpp"
#include "stratcoh/strat.hpp"

using namespace stratcoh;
using io::Json;
using poset::Element;

namespace {

enum class Format { Text, Doc, Csv };

struct RunConfig {
  std::string command;
  std::string input;
  std::string ring;  // empty: the command's default
  std::string format = "text";
  int pages = 0;
  int workers = 0;
  bool verbose = false;
  // per-command parameters
  std::string x, y, alpha, rho;
  bool projector = false;
  int k = 0, n = 0, n_max = 0, braid = 0;
  std::string space = "plane", pattern = "standard", n_range = "1..6", i_range = "-2..0";
};

// ------------------------------------------------------------ rendering

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::vector<Table> tables;
  std::vector<std::string> lines;  // trailing verdicts like "OK"
  Json doc = Json::object();
  bool failed = false;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream o;
  o << std::hex << std::setw(16) << std::setfill('0') << v;
  return o.str();
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void print_text(const Table& t, std::ostream& os) {
  if (!t.title.empty()) os << "## " << t.title << "\n";
  std::vector<std::size_t> w(t.header.size(), 0);
  for (std::size_t c = 0; c < t.header.size(); ++c) w[c] = t.header[c].size();
  for (const auto& r : t.rows)
    for (std::size_t c = 0; c < r.size() && c < w.size(); ++c) w[c] = std::max(w[c], r[c].size());
  auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) {
      s += r[c];
      if (c + 1 < r.size()) s += std::string(w[c] - r[c].size() + 2, ' ');
    }
    os << s << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  if (t.rows.empty()) os << "(empty)\n";
}

void print_csv(const Table& t, std::ostream& os) {
  if (!t.title.empty()) os << "# " << t.title << "\n";
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_cell(r[c]);
    os << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

Json provenance(const RunConfig& cfg, const std::string& hash_input, const std::string& ring) {
  Json p;
  p["command"] = cfg.command;
  p["input_fnv1a64"] = hex(fnv1a(hash_input));
  p["ring"] = ring;
  p["page_cap"] = cfg.pages ? Json(cfg.pages) : Json("none");
  return p;
}

void emit(const Report& r, const RunConfig& cfg, const Json& prov, Format fmt) {
  if (fmt == Format::Doc) {
    Json out;
    out["provenance"] = prov;
    out["result"] = r.doc;
    std::cout << io::dump(out);
    return;
  }
  const std::string c = "# ";
  std::cout << c << "stratcoh " << cfg.command << "\n";
  std::cout << c << "input fnv1a64=" << prov["input_fnv1a64"].get<std::string>() << "\n";
  std::cout << c << "ring " << prov["ring"].get<std::string>() << ", page cap "
            << (cfg.pages ? std::to_string(cfg.pages) : std::string("none")) << "\n";
  for (const auto& t : r.tables) {
    if (fmt == Format::Csv) print_csv(t, std::cout);
    else print_text(t, std::cout);
  }
  for (const auto& l : r.lines) std::cout << (fmt == Format::Csv ? "# " : "") << l << "\n";
}

std::string torsion_text(const std::vector<Integer>& t) {
  if (t.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? " " : "") + std::string("Z/") + io::integer_string(t[i]);
  return s;
}

std::string weights_text(const std::map<int, std::size_t>& w) {
  if (w.empty()) return "-";
  std::string s;
  for (auto [k, r] : w) s += (s.empty() ? "" : " ") + std::string("w") + std::to_string(k) + ":" + std::to_string(r);
  return s;
}

Table module_table(const std::string& title, const homalg::GradedModule& m, const std::string& deg = "degree") {
  Table t{title, {deg, "rank", "torsion", "weights"}, {}};
  for (int k : m.degrees()) {
    const auto& c = m.at(k);
    t.rows.push_back({std::to_string(k), std::to_string(c.rank), torsion_text(c.torsion), weights_text(c.weights)});
  }
  return t;
}

void add_pages(Report& r, const specseq::SpectralSequence& s, const std::string& prefix = "") {
  Table t{prefix + "pages", {"r", "p", "q", "dim", "d_rank"}, {}};
  for (const auto& pg : s.pages)
    for (const auto& [pq, d] : pg.dims) {
      if (!d) continue;
      t.rows.push_back({std::to_string(pg.r), std::to_string(pq.first), std::to_string(pq.second), std::to_string(d),
                        std::to_string(pg.differential_rank(pq.first, pq.second))});
    }
  r.tables.push_back(t);
  r.tables.push_back(module_table(prefix + "abutment", s.abutment));
  r.lines.push_back(prefix + "degeneration page " + std::to_string(specseq::degeneration_page(s)) +
                    (s.truncated ? " (page cap reached)" : ""));
}

// ----------------------------------------------------------------- inputs

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  ss << in.rdbuf();
  return ss.str();
}

Ring ring_or(const RunConfig& cfg, Ring fallback) { return cfg.ring.empty() ? fallback : Ring::parse(cfg.ring); }

/// Exact id first; then "bottom"/"0" and "top"/"1" as aliases.
Element resolve(const poset::Poset& P, const std::string& id, const std::string& what) {
  if (auto e = P.find(id)) return *e;
  if (id == "bottom" || id == "0") {
    if (auto b = P.bottom()) return *b;
    throw Error(ErrorCode::UnknownElement, what + ": the poset has no bottom element");
  }
  if (id == "top" || id == "1") {
    if (auto t = P.top()) return *t;
    throw Error(ErrorCode::UnknownElement, what + ": the poset has no top element");
  }
  throw Error(ErrorCode::UnknownElement, what + ": no element '" + id + "'");
}

bool is_model(const Json& j) {
  auto f = j.find("format");
  return f != j.end() && f->is_string() && f->get<std::string>() == "stratcoh-model";
}

/// 3, 1..6 or 1,2,5.
std::vector<int> parse_range(const std::string& s, const std::string& what) {
  std::vector<int> out;
  auto num = [&](const std::string& t) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, what + ": not an integer range '" + s + "'");
    }
  };
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(num(part));
      continue;
    }
    int a = num(part.substr(0, dots)), b = num(part.substr(dots + 2));
    for (int v = a; a <= b ? v <= b : v >= b; v += a <= b ? 1 : -1) out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::ParseError, what + ": empty range");
  return out;
}

generators::SpaceModel load_space(const std::string& spec, std::string& hash) {
  if (spec == "plane" || spec == "C") return generators::plane_model();
  if (spec == "P1") return generators::projective_line_model();
  if (spec.size() > 1 && spec[0] == 'R' && std::isdigit(static_cast<unsigned char>(spec[1])))
    return generators::euclidean_model(std::stoi(spec.substr(1)));
  const std::string text = read_input(spec);
  hash += text;
  return io::space_from_json(io::parse_document(text));
}

generators::DiagonalPattern load_pattern(const std::string& spec, std::string& hash) {
  if (spec == "standard") return generators::standard_diagonal();
  if (spec.rfind("k-equals:", 0) == 0) return generators::k_equals(std::stoi(spec.substr(9)));
  const std::string text = read_input(spec);
  hash += text;
  return io::pattern_from_json(io::parse_document(text));
}

// --------------------------------------------------------------- commands

int run_poset(const std::string& sub, const RunConfig& cfg, Format fmt) {
  const std::string text = read_input(cfg.input);
  const Json doc = io::parse_document(text);
  poset::Poset P;
  poset::IncreasingFunction sigma;
  if (is_model(doc)) {
    auto m = io::model_from_json(doc);
    P = m.poset;
    sigma = m.sigma;
  } else {
    P = io::poset_from_json(doc);
    auto s = doc.find("sigma");
    sigma = s != doc.end() ? io::sigma_from_json(*s, P) : poset::default_grading(P);
  }
  auto pick = [&](const std::string& v, const std::string& fallback, const std::string& what) {
    return resolve(P, v.empty() ? fallback : v, what);
  };
  Report r;
  std::string ring_name;
  if (sub == "mobius") {
    const Element x = pick(cfg.x, "bottom", "--x"), y = pick(cfg.y, "top", "--y");
    const long long mu = poset::mobius(P, x, y);
    ring_name = "Z";
    r.tables.push_back({"", {"x", "y", "mobius"}, {{P.id(x), P.id(y), std::to_string(mu)}}});
    r.doc = {{"x", P.id(x)}, {"y", P.id(y)}, {"mobius", mu}};
  } else if (sub == "interval-cohomology") {
    const Element x = pick(cfg.x, "bottom", "--x"), y = pick(cfg.y, "top", "--y");
    const Ring ring = ring_or(cfg, Ring::integers());
    ring_name = ring.to_string();
    auto h = poset::reduced_interval_cohomology(P, x, y, ring);
    r.tables.push_back(module_table("reduced cohomology of (" + P.id(x) + ", " + P.id(y) + ")", h));
    r.doc = {{"x", P.id(x)}, {"y", P.id(y)}, {"cohomology", io::module_to_json(h)}};
  } else if (sub == "acyclicity-ss") {
    const Element x = pick(cfg.x, "bottom", "--x"), y = pick(cfg.y, "top", "--y");
    const Ring ring = ring_or(cfg, Ring::rationals());
    ring_name = ring.to_string();
    if (!cfg.rho.empty() && cfg.rho != "default" && cfg.rho != "sigma")
      throw Error(ErrorCode::ParseError, "--sigma: expected 'default' or 'sigma'");
    const auto f = cfg.rho == "default" ? poset::default_grading(P) : sigma;
    auto ss = poset::acyclicity_ss(P, x, y, f, ring);
    add_pages(r, ss);
    bool zero = true;
    for (const auto& [pq, d] : ss.infinity().dims) zero &= d == 0;
    r.lines.push_back(zero ? "E_inf vanishes" : "E_inf does not vanish");
    r.doc = io::spectral_sequence_to_json(ss);
    r.doc["e_infinity_zero"] = zero;
  } else if (sub == "cm-check") {
    ring_name = "Z";
    if (!cfg.rho.empty() && cfg.rho != "default" && cfg.rho != "sigma")
      throw Error(ErrorCode::ParseError, "--rho: expected 'default' or 'sigma'");
    const auto rho = cfg.rho == "sigma" ? sigma : poset::default_grading(P);
    const bool cm = poset::is_cohen_macaulay_graded(P, rho);
    r.lines.push_back(std::string("cohen-macaulay: ") + (cm ? "yes" : "no"));
    r.doc = {{"cohen_macaulay", cm}};
  }
  emit(r, cfg, provenance(cfg, text, ring_name), fmt);
  return 0;
}

int run_strat(const std::string& sub, const RunConfig& cfg, Format fmt) {
  const std::string text = read_input(cfg.input);
  auto model = io::model_from_json(io::parse_document(text));
  Report r;
  std::string ring_name = model.ring.to_string();

  if (sub == "validate") {
    auto rep = strat::validate(model);
    if (rep.ok()) {
      r.lines.push_back("OK");
    } else {
      Table t{"violations", {"code", "message"}, {}};
      for (const auto& v : rep.violations) t.rows.push_back({std::string(stratcoh::to_string(v.code)), v.message});
      r.tables.push_back(t);
      r.lines.push_back("INVALID (" + std::to_string(rep.violations.size()) + " violations)");
      r.failed = true;
    }
    Json vs = Json::array();
    for (const auto& v : rep.violations) vs.push_back({{"code", stratcoh::to_string(v.code)}, {"message", v.message}});
    r.doc = {{"ok", rep.ok()}, {"violations", vs}};
    emit(r, cfg, provenance(cfg, text, ring_name), fmt);
    return r.failed ? 1 : 0;
  }

  const strat::ValidatedModel s(std::move(model));
  const Ring base = s.ring();
  auto field_default = base.is_field() ? base : Ring::rationals();
  auto options = specseq::PagesOptions{cfg.pages, false};

  if (sub == "hc-open") {
    const Ring ring = ring_or(cfg, base);
    ring_name = ring.to_string();
    auto h = strat::open_stratum_compact_cohomology(s, ring);
    r.tables.push_back(module_table("compactly supported cohomology of the open stratum", h));
    r.doc = {{"compact_cohomology", io::module_to_json(h)}};
  } else if (sub == "e1") {
    const Ring ring = ring_or(cfg, base);
    ring_name = ring.to_string();
    auto page = strat::theorem_A_E1(s, ring);
    Table cells{"cells", {"beta", "p", "i", "j", "p+q", "rank", "torsion"}, {}};
    Json cj = Json::array();
    for (const auto& c : page.cells) {
      const int p = s.sigma(c.beta);
      cells.rows.push_back({s.poset().id(c.beta), std::to_string(p), std::to_string(c.i), std::to_string(c.j),
                            std::to_string(c.i + c.j + 2), std::to_string(c.product.rank), torsion_text(c.product.torsion)});
      Json tors = Json::array();
      for (const auto& t : c.product.torsion) tors.push_back(io::integer_string(t));
      cj.push_back({{"beta", s.poset().id(c.beta)}, {"p", p}, {"i", c.i}, {"j", c.j}, {"rank", c.product.rank}, {"torsion", tors}});
    }
    Table e1{"E1", {"p", "q", "rank", "torsion", "weights"}, {}};
    Json ej = Json::array();
    for (const auto& [pq, c] : page.E1) {
      e1.rows.push_back({std::to_string(pq.first), std::to_string(pq.second), std::to_string(c.rank),
                         torsion_text(c.torsion), weights_text(c.weights)});
      Json tors = Json::array();
      for (const auto& t : c.torsion) tors.push_back(io::integer_string(t));
      ej.push_back({{"p", pq.first}, {"q", pq.second}, {"rank", c.rank}, {"torsion", tors}});
    }
    r.tables.push_back(cells);
    r.tables.push_back(e1);
    r.doc = {{"cells", cj}, {"E1", ej}};
  } else if (sub == "ss") {
    const Ring ring = ring_or(cfg, field_default);
    ring_name = ring.to_string();
    auto ss = strat::theorem_A_ss(s, ring, options);
    add_pages(r, ss);
    r.doc = io::spectral_sequence_to_json(ss);
  } else if (sub == "closed-ss") {
    const Ring ring = ring_or(cfg, field_default);
    ring_name = ring.to_string();
    const Element a = resolve(s.poset(), cfg.alpha.empty() ? "bottom" : cfg.alpha, "--alpha");
    auto ss = strat::closed_filtration_ss(s, a, ring, options);
    add_pages(r, ss);
    r.doc = io::spectral_sequence_to_json(ss);
  } else if (sub == "k-complex") {
    const Ring ring = ring_or(cfg, base);
    ring_name = ring.to_string();
    if (!cfg.rho.empty() && cfg.rho != "default" && cfg.rho != "sigma")
      throw Error(ErrorCode::ParseError, "--rho: expected 'default' or 'sigma'");
    const auto rho = cfg.rho == "default" ? poset::default_grading(s.poset()) : s.model().sigma;
    auto K = strat::K_complex(s, rho, ring);
    if (ring.is_field()) {
      auto ss = specseq::pages(K, options);
      add_pages(r, ss);
      r.doc = io::spectral_sequence_to_json(ss);
    } else {
      auto f = specseq::integral_filtration(K);
      Table gr{"graded abutment", {"p", "n", "rank", "torsion"}, {}};
      Json gj = Json::array();
      for (const auto& [pn, c] : f.graded) {
        if (c.is_zero()) continue;
        gr.rows.push_back({std::to_string(pn.first), std::to_string(pn.second), std::to_string(c.rank), torsion_text(c.torsion)});
        gj.push_back({{"p", pn.first}, {"n", pn.second}, {"rank", c.rank}});
      }
      r.tables.push_back(gr);
      r.tables.push_back(module_table("abutment", f.abutment));
      r.doc = {{"abutment", io::module_to_json(f.abutment)}, {"graded", gj}};
    }
  } else if (sub == "euler-check") {
    ring_name = field_default.to_string();
    auto rep = strat::euler_identities_check(s);
    Table t{"checks", {"identity", "alpha", "weight", "lhs", "rhs", "status"}, {}};
    Json cj = Json::array();
    for (const auto& c : rep.checks) {
      t.rows.push_back({c.identity, s.poset().id(c.alpha), c.weight ? std::to_string(*c.weight) : "-",
                        std::to_string(c.lhs), std::to_string(c.rhs), c.ok() ? "ok" : "FAIL"});
      cj.push_back({{"identity", c.identity}, {"alpha", s.poset().id(c.alpha)},
                    {"weight", c.weight ? Json(*c.weight) : Json(nullptr)}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    }
    r.tables.push_back(t);
    r.failed = !rep.ok();
    r.lines.push_back(rep.ok() ? "OK" : "FAILED (" + std::to_string(rep.failures().size()) + " identities)");
    r.doc = {{"ok", rep.ok()}, {"checks", cj}};
  } else if (sub == "bm") {
    const Ring ring = ring_or(cfg, field_default);
    ring_name = ring.to_string();
    auto bm = strat::borel_moore_ss(s, ring, options);
    r.tables.push_back(module_table("Borel-Moore homology", bm.homology, "i"));
    add_pages(r, bm.ss, "dual ");
    r.doc = {{"homology", io::module_to_json(bm.homology)}, {"ss", io::spectral_sequence_to_json(bm.ss)}};
  } else if (sub == "invariants") {
    const Ring ring = ring_or(cfg, Ring::rationals());
    ring_name = ring.to_string();
    auto inv = strat::invariant_dims(s, ring, {cfg.projector, 5040});
    std::map<int, char> degs;
    for (auto [k, v] : inv.compact) degs[k] = 1;
    for (auto [k, v] : inv.borel_moore) degs[k] = 1;
    auto get = [](const std::map<int, std::size_t>& m, int k) {
      auto it = m.find(k);
      return it == m.end() ? std::size_t(0) : it->second;
    };
    Table t{"invariant dimensions", {"degree", "compact", "borel_moore"}, {}};
    Json cj = Json::object(), bj = Json::object();
    for (auto [k, _] : degs) t.rows.push_back({std::to_string(k), std::to_string(get(inv.compact, k)), std::to_string(get(inv.borel_moore, k))});
    for (auto [k, v] : inv.compact) cj[std::to_string(k)] = v;
    for (auto [k, v] : inv.borel_moore) bj[std::to_string(k)] = v;
    r.tables.push_back(t);
    r.lines.push_back(inv.monomial ? "route: orbit sums" : "route: averaging projector, |G| = " + std::to_string(inv.group_order));
    r.doc = {{"compact", cj}, {"borel_moore", bj}, {"monomial", inv.monomial}, {"group_order", inv.group_order}};
  }
  emit(r, cfg, provenance(cfg, text, ring_name), fmt);
  return r.failed ? 1 : 0;
}

int run_gen(const std::string& sub, const RunConfig& cfg, Format fmt) {
  std::string hash = sub;  // generated documents hash their parameters
  auto model_out = [&](const strat::StratifiedSpaceModel& m) {
    Json j = io::model_to_json(m);
    j["provenance"] = provenance(cfg, hash, m.ring.to_string());
    std::cout << io::dump(j);
    return 0;
  };
  if (sub == "snc") {
    if (!cfg.input.empty()) {
      const std::string text = read_input(cfg.input);
      hash += text;
      return model_out(generators::snc_stratification(io::snc_from_json(io::parse_document(text))));
    }
    const Ring ring = ring_or(cfg, Ring::integers());
    hash += " k=" + std::to_string(cfg.k) + " ring=" + ring.to_string();
    return model_out(generators::snc_stratification(generators::snc_coordinate_divisors(cfg.k, ring)));
  }
  if (sub == "arrangement") {
    const Ring ring = ring_or(cfg, Ring::integers());
    hash += " ring=" + ring.to_string();
    if (cfg.braid > 0) {
      hash += " braid=" + std::to_string(cfg.braid);
      return model_out(generators::subspace_arrangement(generators::braid_arrangement(cfg.braid), ring));
    }
    if (cfg.input.empty()) throw Error(ErrorCode::ParseError, "gen arrangement needs --braid N or an arrangement document");
    const std::string text = read_input(cfg.input);
    hash += text;
    return model_out(generators::subspace_arrangement(io::arrangement_from_json(io::parse_document(text)), ring));
  }
  if (sub == "config") {
    auto M = load_space(cfg.space, hash);
    auto A = load_pattern(cfg.pattern, hash);
    hash += " n=" + std::to_string(cfg.n) + " space=" + cfg.space + " pattern=" + cfg.pattern;
    return model_out(generators::configuration_stratification(M, cfg.n, A));
  }

  Report r;
  if (sub == "stability-table") {
    auto M = load_space(cfg.space, hash);
    auto A = load_pattern(cfg.pattern, hash);
    const auto ns = parse_range(cfg.n_range, "--n"), is = parse_range(cfg.i_range, "--i");
    hash += " n=" + cfg.n_range + " i=" + cfg.i_range + " space=" + cfg.space + " pattern=" + cfg.pattern;
    auto t = generators::stability_table(M, A, is, ns);
    Table tab{"dim (H^BM_{i + d n})^{S_n}", {"n"}, {}};
    for (int i : is) tab.header.push_back("i=" + std::to_string(i));
    Json rows = Json::array();
    for (std::size_t row = 0; row < ns.size(); ++row) {
      std::vector<std::string> cells{std::to_string(ns[row])};
      Json vals = Json::object();
      for (std::size_t c = 0; c < is.size(); ++c) {
        cells.push_back(std::to_string(t.values[row][c]));
        vals[std::to_string(is[c])] = t.values[row][c];
      }
      tab.rows.push_back(cells);
      rows.push_back({{"n", ns[row]}, {"values", vals}});
    }
    std::vector<std::string> stable{"stable from"}, tail{"constant tail"};
    for (std::size_t c = 0; c < is.size(); ++c) {
      stable.push_back(std::to_string(t.stable_from[c]));
      tail.push_back(t.constant_tail[c] ? "yes" : "no");
    }
    tab.rows.push_back(stable);
    tab.rows.push_back(tail);
    r.tables.push_back(tab);
    r.doc = {{"dimension", M.dimension}, {"rows", rows}, {"stable_from", t.stable_from}, {"constant_tail", t.constant_tail}};
  } else if (sub == "codim-profile") {
    auto A = load_pattern(cfg.pattern, hash);
    hash += " n_max=" + std::to_string(cfg.n_max) + " pattern=" + cfg.pattern;
    auto prof = generators::indecomposable_codim_profile(A, cfg.n_max);
    Table tab{"indecomposable strata", {"n", "elements", "indecomposables", "min_sigma"}, {}};
    Json rows = Json::array();
    for (const auto& row : prof.rows) {
      tab.rows.push_back({std::to_string(row.n), std::to_string(row.elements), std::to_string(row.indecomposables),
                          row.min_sigma ? std::to_string(*row.min_sigma) : "-"});
      rows.push_back({{"n", row.n}, {"elements", row.elements}, {"indecomposables", row.indecomposables},
                      {"min_sigma", row.min_sigma ? Json(*row.min_sigma) : Json(nullptr)}});
    }
    r.tables.push_back(tab);
    std::ostringstream c;
    c << std::setprecision(6) << prof.constant;
    r.lines.push_back("min sigma >= " + c.str() + " n: " + (prof.linear_bound ? "yes" : "no"));
    r.doc = {{"rows", rows}, {"constant", prof.constant}, {"linear_bound", prof.linear_bound}};
  }
  emit(r, cfg, provenance(cfg, hash, "Q"), fmt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stratcoh: compactly supported cohomology of stratified spaces"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* c, bool needs_input) {
    c->add_option("--ring", cfg.ring, "Z, Q or Fp:<p>");
    c->add_option("--format", cfg.format, "text, doc or csv")->check(CLI::IsMember({"text", "doc", "csv"}));
    c->add_option("--pages", cfg.pages, "stop after this page (0: run to stabilization)")->check(CLI::NonNegativeNumber);
    c->add_option("--workers", cfg.workers, "cap on worker threads")->check(CLI::PositiveNumber);
    c->add_flag("-v,--verbose", cfg.verbose, "timing on stderr");
    auto* in = c->add_option("input", cfg.input, "input document ('-' for stdin)");
    if (needs_input) in->required();
  };

  const std::map<std::string, std::string> about = {
      {"mobius", "Möbius function mu(x, y)"},
      {"interval-cohomology", "reduced cohomology of the open interval (x, y)"},
      {"acyclicity-ss", "pages of the acyclicity spectral sequence of [x, y)"},
      {"cm-check", "Cohen-Macaulay test for a graded poset"},
      {"validate", "structural checks, all violations listed"},
      {"hc-open", "H_c of the open stratum S_0"},
      {"e1", "E_1 page assembled from interval and stratum cohomology"},
      {"ss", "all pages of the open-stratum spectral sequence"},
      {"closed-ss", "closed-stratum spectral sequence of a closure"},
      {"k-complex", "compressed complex over a Cohen-Macaulay poset"},
      {"euler-check", "additivity and Möbius inversion of Euler characteristics"},
      {"bm", "Borel-Moore homology spectral sequence"},
      {"invariants", "invariant dimensions under the group action"},
      {"snc", "model of a simple normal crossings complement"},
      {"arrangement", "model of a subspace arrangement complement"},
      {"config", "model of a configuration space"},
      {"stability-table", "invariant Borel-Moore dimensions across n"},
      {"codim-profile", "codimension of indecomposable strata across n"},
  };
  std::vector<std::pair<CLI::App*, std::string>> leaves;
  auto* poset_cmd = app.add_subcommand("poset", "poset computations on a poset or model document");
  poset_cmd->require_subcommand(1);
  for (std::string s : {"mobius", "interval-cohomology", "acyclicity-ss", "cm-check"}) {
    auto* c = poset_cmd->add_subcommand(s, about.at(s));
    common(c, true);
    if (s != "cm-check") {
      c->add_option("--x", cfg.x, "lower element (default: bottom)");
      c->add_option("--y", cfg.y, "upper element (default: top)");
    }
    if (s == "acyclicity-ss") c->add_option("--sigma", cfg.rho, "'sigma' (from the document, default) or 'default' (rank)");
    if (s == "cm-check") c->add_option("--rho", cfg.rho, "'default' (rank, default) or 'sigma'");
    leaves.emplace_back(c, "poset " + s);
  }
  auto* strat_cmd = app.add_subcommand("strat", "engine operations on a model document");
  strat_cmd->require_subcommand(1);
  for (std::string s : {"validate", "hc-open", "e1", "ss", "closed-ss", "k-complex", "euler-check", "bm", "invariants"}) {
    auto* c = strat_cmd->add_subcommand(s, about.at(s));
    common(c, true);
    if (s == "closed-ss") c->add_option("--alpha", cfg.alpha, "closed stratum (default: bottom)");
    if (s == "k-complex") c->add_option("--rho", cfg.rho, "'sigma' (default) or 'default' (rank)");
    if (s == "invariants") c->add_flag("--projector", cfg.projector, "enumerate the group and average");
    leaves.emplace_back(c, "strat " + s);
  }
  auto* gen_cmd = app.add_subcommand("gen", "generate model documents and tables");
  gen_cmd->require_subcommand(1);
  for (std::string s : {"snc", "arrangement", "config", "stability-table", "codim-profile"}) {
    auto* c = gen_cmd->add_subcommand(s, about.at(s));
    common(c, false);
    if (s == "snc") c->add_option("--k", cfg.k, "number of coordinate divisors on (P^1)^k")->check(CLI::NonNegativeNumber);
    if (s == "arrangement") c->add_option("--braid", cfg.braid, "braid arrangement in C^n")->check(CLI::PositiveNumber);
    if (s == "config") c->add_option("--n", cfg.n, "number of points")->required()->check(CLI::PositiveNumber);
    if (s == "config" || s == "stability-table")
      c->add_option("--space", cfg.space, "plane, P1, R<d> or a space document");
    if (s != "snc" && s != "arrangement")
      c->add_option("--pattern", cfg.pattern, "standard, k-equals:<k> or a pattern document");
    if (s == "stability-table") {
      c->add_option("--n", cfg.n_range, "range of n, e.g. 1..6");
      c->add_option("--i", cfg.i_range, "range of i, e.g. -2..0");
    }
    if (s == "codim-profile") c->add_option("--n-max", cfg.n_max, "largest n")->required()->check(CLI::PositiveNumber);
    leaves.emplace_back(c, "gen " + s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string group, sub;
  for (auto& [c, name] : leaves)
    if (c->parsed()) {
      cfg.command = name;
      group = name.substr(0, name.find(' '));
      sub = c->get_name();
    }
  if (cfg.workers > 0) setenv("STRATCOH_WORKERS", std::to_string(cfg.workers).c_str(), 1);
  const Format fmt = cfg.format == "doc" ? Format::Doc : cfg.format == "csv" ? Format::Csv : Format::Text;

  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  try {
    if (group == "poset") status = run_poset(sub, cfg, fmt);
    else if (group == "strat") status = run_strat(sub, cfg, fmt);
    else status = run_gen(sub, cfg, fmt);
  } catch (const Error& e) {
    std::cerr << "stratcoh: " << e.what() << "\n";
    status = e.code() == ErrorCode::ParseError ? 2 : 1;
  }
  if (cfg.verbose) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "stratcoh: " << cfg.command << " finished in " << std::fixed << std::setprecision(3) << s << " s\n";
  }
  std::cout.flush();
  return status;
}
