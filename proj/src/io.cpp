#include "stratcoh/io.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "stratcoh/error.hpp"

namespace stratcoh::io {

using homalg::ChainMap;
using homalg::CochainComplex;
using poset::Element;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ParseError, (path.empty() ? std::string("document") : path) + ": " + what);
}

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at(path, key), "missing field");
  return *it;
}

const Json* optional_field(const Json& j, const std::string& key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

long long integer_value(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

int small_int(const Json& j, const std::string& path) {
  const long long v = integer_value(j, path);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail(path, "out of range");
  return static_cast<int>(v);
}

std::size_t count(const Json& j, const std::string& path) {
  const long long v = integer_value(j, path);
  if (v < 0) fail(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

Integer big(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_integer(j.get<std::string>());
    } catch (const Error& e) {
      fail(path, e.detail());
    }
  }
  fail(path, "expected an integer or a decimal string");
}

Json big_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return Json(static_cast<long long>(v));
  return Json(v.str());
}

Ring ring_of(const Json& j, const std::string& path) {
  try {
    return Ring::parse(text(j, path));
  } catch (const Error& e) {
    fail(path, e.detail());
  }
}

void expect_format(const Json& j, const std::string& name) {
  if (!j.is_object()) fail("", "expected an object");
  if (const Json* f = optional_field(j, "format"))
    if (!f->is_string() || f->get<std::string>() != name)
      fail("format", "expected \"" + name + "\", found " + f->dump());
}

Element element(const poset::Poset& p, const Json& j, const std::string& path) {
  const std::string id = text(j, path);
  auto e = p.find(id);
  if (!e) fail(path, "unknown element '" + id + "'");
  return *e;
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

std::vector<int> int_list(const Json& j, const std::string& path) {
  std::vector<int> out;
  std::size_t i = 0;
  for (const auto& x : array(j, path)) out.push_back(small_int(x, at(path, i++)));
  return out;
}

Json entries_json(const SparseMatrix& m) {
  Json e = Json::array();
  for (const auto& t : m.triplets()) e.push_back(Json::array({t.row, t.col, big_json(t.value)}));
  return e;
}

std::vector<Triplet> entries_from(const Json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  std::vector<Triplet> out;
  std::size_t i = 0;
  for (const auto& e : array(j, path)) {
    const std::string p = at(path, i++);
    if (!e.is_array() || e.size() != 3) fail(p, "expected [row, col, value]");
    const std::size_t r = count(e[0], at(p, 0)), c = count(e[1], at(p, 1));
    if (r >= rows || c >= cols)
      fail(p, "entry (" + std::to_string(r) + ", " + std::to_string(c) + ") outside a " + std::to_string(rows) + "x" +
                  std::to_string(cols) + " matrix");
    out.push_back({r, c, big(e[2], at(p, 2))});
  }
  return out;
}

}  // namespace

std::string integer_string(const Integer& v) { return v.str(); }

Json parse_document(const std::string& input) {
  try {
    return Json::parse(input);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, input.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (input[i] == '\n') ++line, col = 1;
      else ++col;
    }
    std::string msg = e.what();
    // drop the library's own prefix up to the detail text
    if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ------------------------------------------------------------------ poset

Json poset_to_json(const poset::Poset& p) {
  Json j;
  j["elements"] = p.ids();
  Json covers = Json::array();
  for (auto [a, b] : p.covers()) covers.push_back(Json::array({p.id(a), p.id(b)}));
  j["covers"] = covers;
  return j;
}

poset::Poset poset_from_json(const Json& j) {
  std::vector<std::string> ids;
  const Json& el = array(field(j, "", "elements"), "elements");
  for (std::size_t i = 0; i < el.size(); ++i) ids.push_back(text(el[i], at("elements", i)));
  std::vector<std::pair<std::string, std::string>> rel;
  if (const Json* cv = optional_field(j, "covers")) {
    array(*cv, "covers");
    for (std::size_t i = 0; i < cv->size(); ++i) {
      const auto& c = (*cv)[i];
      const std::string p = at("covers", i);
      if (!c.is_array() || c.size() != 2) fail(p, "expected [lower, upper]");
      rel.emplace_back(text(c[0], at(p, 0)), text(c[1], at(p, 1)));
    }
  }
  try {
    return poset::Poset::from_cover_relations(ids, rel);
  } catch (const Error& e) {
    throw Error(e.code(), "covers: " + e.detail());
  }
}

poset::IncreasingFunction sigma_from_json(const Json& j, const poset::Poset& p, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object {element: value}");
  poset::IncreasingFunction f;
  f.values.assign(p.size(), 0);
  std::vector<char> seen(p.size(), 0);
  for (const auto& [k, v] : j.items()) {
    const std::string kp = at(path, k);
    auto e = p.find(k);
    if (!e) fail(kp, "unknown element '" + k + "'");
    f.values[*e] = small_int(v, kp);
    seen[*e] = 1;
  }
  for (Element e = 0; e < p.size(); ++e)
    if (!seen[e]) fail(path, "no value for '" + p.id(e) + "'");
  return f;
}

// --------------------------------------------------------------- complexes

Json matrix_to_json(const SparseMatrix& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["entries"] = entries_json(m);
  return j;
}

SparseMatrix matrix_from_json(const Json& j, const std::string& path) {
  const std::size_t rows = count(field(j, path, "rows"), at(path, "rows"));
  const std::size_t cols = count(field(j, path, "cols"), at(path, "cols"));
  const Json* e = optional_field(j, "entries");
  if (!e) return SparseMatrix(rows, cols);
  return SparseMatrix::from_triplets(rows, cols, entries_from(*e, at(path, "entries"), rows, cols));
}

Json complex_to_json(const CochainComplex& c) {
  Json j;
  j["ring"] = c.ring().to_string();
  j["lo"] = c.lo();
  j["ranks"] = c.ranks();
  Json d = Json::array();
  for (int k = c.lo(); k < c.hi(); ++k) {
    auto m = c.differential(k);
    if (m.is_zero()) continue;
    Json b;
    b["degree"] = k;
    b["entries"] = entries_json(m);
    d.push_back(b);
  }
  j["differentials"] = d;
  if (c.has_weights()) {
    Json w = Json::array();
    for (int k = c.lo(); k <= c.hi(); ++k) w.push_back(c.weights(k));
    j["weights"] = w;
  }
  return j;
}

CochainComplex complex_from_json(const Json& j, const std::string& path, const Ring* default_ring) {
  if (!j.is_object()) fail(path, "expected an object");
  Ring ring = Ring::integers();
  if (const Json* r = optional_field(j, "ring")) ring = ring_of(*r, at(path, "ring"));
  else if (default_ring) ring = *default_ring;
  const int lo = small_int(field(j, path, "lo"), at(path, "lo"));
  std::vector<std::size_t> ranks;
  {
    const std::string rp = at(path, "ranks");
    std::size_t i = 0;
    for (const auto& r : array(field(j, path, "ranks"), rp)) ranks.push_back(count(r, at(rp, i++)));
  }
  const int n = static_cast<int>(ranks.size());
  std::vector<SparseMatrix> diffs;
  for (int i = 0; i + 1 < n; ++i) diffs.emplace_back(ranks[i + 1], ranks[i]);
  if (const Json* d = optional_field(j, "differentials")) {
    const std::string dp = at(path, "differentials");
    std::set<int> seen;
    std::size_t i = 0;
    for (const auto& b : array(*d, dp)) {
      const std::string bp = at(dp, i++);
      const int k = small_int(field(b, bp, "degree"), at(bp, "degree"));
      if (k < lo || k + 1 > lo + n - 1) fail(at(bp, "degree"), "degree " + std::to_string(k) + " outside the complex");
      if (!seen.insert(k).second) fail(at(bp, "degree"), "degree " + std::to_string(k) + " given twice");
      const std::size_t s = static_cast<std::size_t>(k - lo);
      diffs[s] = SparseMatrix::from_triplets(ranks[s + 1], ranks[s],
                                             entries_from(field(b, bp, "entries"), at(bp, "entries"), ranks[s + 1], ranks[s]));
    }
  }
  std::optional<std::vector<std::vector<int>>> weights;
  if (const Json* w = optional_field(j, "weights")) {
    const std::string wp = at(path, "weights");
    weights.emplace();
    std::size_t i = 0;
    for (const auto& row : array(*w, wp)) {
      weights->push_back(int_list(row, at(wp, i)));
      ++i;
    }
  }
  return wrap(path, [&] { return CochainComplex(ring, lo, ranks, diffs, weights); });
}

Json chain_map_to_json(const ChainMap& f) {
  Json j = Json::array();
  for (const auto& [k, m] : f.blocks()) {
    Json b;
    b["degree"] = k;
    b["rows"] = m.rows();
    b["cols"] = m.cols();
    b["entries"] = entries_json(m);
    j.push_back(b);
  }
  return j;
}

ChainMap chain_map_from_json(const Json& j, const std::string& path) {
  std::map<int, SparseMatrix> blocks;
  std::size_t i = 0;
  for (const auto& b : array(j, path)) {
    const std::string bp = at(path, i++);
    const int k = small_int(field(b, bp, "degree"), at(bp, "degree"));
    if (blocks.count(k)) fail(at(bp, "degree"), "degree " + std::to_string(k) + " given twice");
    blocks[k] = matrix_from_json(b, bp);
  }
  return ChainMap(std::move(blocks));
}

// ------------------------------------------------------------------ models

Json model_to_json(const strat::StratifiedSpaceModel& m) {
  const auto& P = m.poset;
  Json j;
  j["format"] = "stratcoh-model";
  j["version"] = 1;
  j["ring"] = m.ring.to_string();
  j["poset"] = poset_to_json(P);
  // identical complexes share one reference id
  Json complexes = Json::object(), strata = Json::object();
  std::map<std::string, std::string> ref;
  for (Element e = 0; e < m.strata.size(); ++e) {
    Json c = complex_to_json(m.strata[e]);
    const std::string key = c.dump();
    auto it = ref.find(key);
    if (it == ref.end()) {
      const std::string id = "c" + std::to_string(ref.size());
      it = ref.emplace(key, id).first;
      complexes[id] = c;
    }
    strata[e < P.size() ? P.id(e) : std::to_string(e)] = it->second;
  }
  j["complexes"] = complexes;
  j["strata"] = strata;
  Json res = Json::array();
  for (const auto& [key, f] : m.restrictions) {
    Json r;
    r["from"] = key.first < P.size() ? P.id(key.first) : std::to_string(key.first);
    r["to"] = key.second < P.size() ? P.id(key.second) : std::to_string(key.second);
    r["blocks"] = chain_map_to_json(f);
    res.push_back(r);
  }
  j["restrictions"] = res;
  Json sigma = Json::object();
  for (Element e = 0; e < P.size() && e < m.sigma.values.size(); ++e) sigma[P.id(e)] = m.sigma.values[e];
  j["sigma"] = sigma;
  if (!m.action.empty()) {
    Json act = Json::array();
    for (const auto& g : m.action) {
      Json gj, perm = Json::object(), maps = Json::object();
      for (Element e = 0; e < g.strata.size() && e < P.size(); ++e)
        perm[P.id(e)] = g.strata[e] < P.size() ? P.id(g.strata[e]) : std::to_string(g.strata[e]);
      for (Element e = 0; e < g.maps.size() && e < P.size(); ++e) maps[P.id(e)] = chain_map_to_json(g.maps[e]);
      gj["permutation"] = perm;
      gj["maps"] = maps;
      act.push_back(gj);
    }
    j["action"] = act;
  }
  return j;
}

strat::StratifiedSpaceModel model_from_json(const Json& j) {
  expect_format(j, "stratcoh-model");
  strat::StratifiedSpaceModel m;
  if (const Json* r = optional_field(j, "ring")) m.ring = ring_of(*r, "ring");
  {
    const Json& pj = field(j, "", "poset");
    try {
      m.poset = poset_from_json(pj);
    } catch (const Error& e) {
      throw Error(e.code(), "poset." + e.detail());
    }
  }
  const auto& P = m.poset;
  std::map<std::string, CochainComplex> complexes;
  if (const Json* cj = optional_field(j, "complexes")) {
    if (!cj->is_object()) fail("complexes", "expected an object {id: complex}");
    for (const auto& [id, c] : cj->items()) complexes.emplace(id, complex_from_json(c, at("complexes", id), &m.ring));
  }
  const Json& sj = field(j, "", "strata");
  if (!sj.is_object()) fail("strata", "expected an object {element: complex id}");
  m.strata.assign(P.size(), CochainComplex(m.ring));
  std::vector<char> have(P.size(), 0);
  for (const auto& [k, v] : sj.items()) {
    const std::string kp = at("strata", k);
    auto e = P.find(k);
    if (!e) fail(kp, "unknown element '" + k + "'");
    if (v.is_string()) {
      auto it = complexes.find(v.get<std::string>());
      if (it == complexes.end()) fail(kp, "unknown complex '" + v.get<std::string>() + "'");
      m.strata[*e] = it->second;
    } else {
      m.strata[*e] = complex_from_json(v, kp, &m.ring);
    }
    have[*e] = 1;
  }
  for (Element e = 0; e < P.size(); ++e)
    if (!have[e]) fail("strata", "no model for '" + P.id(e) + "'");
  if (const Json* rj = optional_field(j, "restrictions")) {
    std::size_t i = 0;
    for (const auto& r : array(*rj, "restrictions")) {
      const std::string rp = at("restrictions", i++);
      const Element a = element(P, field(r, rp, "from"), at(rp, "from"));
      const Element b = element(P, field(r, rp, "to"), at(rp, "to"));
      if (m.restrictions.count({a, b})) fail(rp, "restriction '" + P.id(a) + "' → '" + P.id(b) + "' given twice");
      m.restrictions[{a, b}] = chain_map_from_json(field(r, rp, "blocks"), at(rp, "blocks"));
    }
  }
  if (const Json* s = optional_field(j, "sigma")) m.sigma = sigma_from_json(*s, P);
  else m.sigma = poset::default_grading(P);
  if (const Json* aj = optional_field(j, "action")) {
    std::size_t i = 0;
    for (const auto& g : array(*aj, "action")) {
      const std::string gp = at("action", i++);
      strat::GroupGenerator gen;
      gen.strata.resize(P.size());
      gen.maps.resize(P.size());
      const Json& perm = field(g, gp, "permutation");
      if (!perm.is_object()) fail(at(gp, "permutation"), "expected an object {element: image}");
      std::vector<char> seen(P.size(), 0);
      for (const auto& [k, v] : perm.items()) {
        const std::string kp = at(at(gp, "permutation"), k);
        auto e = P.find(k);
        if (!e) fail(kp, "unknown element '" + k + "'");
        gen.strata[*e] = element(P, v, kp);
        seen[*e] = 1;
      }
      for (Element e = 0; e < P.size(); ++e)
        if (!seen[e]) fail(at(gp, "permutation"), "no image for '" + P.id(e) + "'");
      if (const Json* mj = optional_field(g, "maps")) {
        if (!mj->is_object()) fail(at(gp, "maps"), "expected an object {element: blocks}");
        for (const auto& [k, v] : mj->items()) {
          const std::string kp = at(at(gp, "maps"), k);
          auto e = P.find(k);
          if (!e) fail(kp, "unknown element '" + k + "'");
          gen.maps[*e] = chain_map_from_json(v, kp);
        }
      }
      m.action.push_back(std::move(gen));
    }
  }
  return m;
}

// ------------------------------------------------------- generator inputs

Json pattern_to_json(const generators::DiagonalPattern& p) {
  Json j;
  j["format"] = "stratcoh-pattern";
  j["templates"] = p.templates;
  return j;
}

generators::DiagonalPattern pattern_from_json(const Json& j) {
  expect_format(j, "stratcoh-pattern");
  generators::DiagonalPattern p;
  const Json& t = array(field(j, "", "templates"), "templates");
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::string tp = at("templates", i);
    std::vector<std::vector<int>> blocks;
    for (std::size_t b = 0; b < array(t[i], tp).size(); ++b) blocks.push_back(int_list(t[i][b], at(tp, b)));
    p.templates.push_back(std::move(blocks));
  }
  return p;
}

Json arrangement_to_json(const generators::SubspaceArrangementSpec& s) {
  Json j;
  j["format"] = "stratcoh-arrangement";
  j["ambient_dimension"] = s.ambient_dimension;
  Json flats = Json::array();
  for (std::size_t i = 0; i < s.flats.size(); ++i) {
    Json f;
    f["id"] = s.flats[i];
    f["dimension"] = i < s.dimensions.size() ? s.dimensions[i] : 0;
    flats.push_back(f);
  }
  j["flats"] = flats;
  Json covers = Json::array();
  for (const auto& [a, b] : s.covers) covers.push_back(Json::array({a, b}));
  j["covers"] = covers;
  return j;
}

generators::SubspaceArrangementSpec arrangement_from_json(const Json& j) {
  expect_format(j, "stratcoh-arrangement");
  generators::SubspaceArrangementSpec s;
  s.ambient_dimension = small_int(field(j, "", "ambient_dimension"), "ambient_dimension");
  const Json& flats = array(field(j, "", "flats"), "flats");
  for (std::size_t i = 0; i < flats.size(); ++i) {
    const std::string fp = at("flats", i);
    s.flats.push_back(text(field(flats[i], fp, "id"), at(fp, "id")));
    s.dimensions.push_back(small_int(field(flats[i], fp, "dimension"), at(fp, "dimension")));
  }
  if (const Json* cv = optional_field(j, "covers")) {
    std::size_t i = 0;
    for (const auto& c : array(*cv, "covers")) {
      const std::string cp = at("covers", i++);
      if (!c.is_array() || c.size() != 2) fail(cp, "expected [lower, upper]");
      s.covers.emplace_back(text(c[0], at(cp, 0)), text(c[1], at(cp, 1)));
    }
  }
  return s;
}

Json space_to_json(const generators::SpaceModel& m) {
  Json j;
  j["format"] = "stratcoh-space";
  j["dimension"] = m.dimension;
  j["unit"] = m.unit ? Json(*m.unit) : Json(nullptr);
  j["complex"] = complex_to_json(m.complex);
  return j;
}

generators::SpaceModel space_from_json(const Json& j) {
  expect_format(j, "stratcoh-space");
  generators::SpaceModel m;
  m.dimension = small_int(field(j, "", "dimension"), "dimension");
  if (const Json* u = optional_field(j, "unit")) m.unit = count(*u, "unit");
  m.complex = complex_from_json(field(j, "", "complex"), "complex");
  return m;
}

Json snc_to_json(const generators::SncComponents& c) {
  Json j;
  j["format"] = "stratcoh-snc";
  j["k"] = c.k;
  j["ring"] = c.ring.to_string();
  Json models = Json::array();
  for (const auto& [s, cx] : c.models) {
    Json e;
    e["subset"] = s;
    e["complex"] = complex_to_json(cx);
    models.push_back(e);
  }
  j["models"] = models;
  Json res = Json::array();
  for (const auto& [key, f] : c.restrictions) {
    Json e;
    e["subset"] = key.first;
    e["add"] = key.second;
    e["blocks"] = chain_map_to_json(f);
    res.push_back(e);
  }
  j["restrictions"] = res;
  return j;
}

generators::SncComponents snc_from_json(const Json& j) {
  expect_format(j, "stratcoh-snc");
  generators::SncComponents c;
  c.k = small_int(field(j, "", "k"), "k");
  if (const Json* r = optional_field(j, "ring")) c.ring = ring_of(*r, "ring");
  std::size_t i = 0;
  for (const auto& e : array(field(j, "", "models"), "models")) {
    const std::string ep = at("models", i++);
    auto s = int_list(field(e, ep, "subset"), at(ep, "subset"));
    c.models[s] = complex_from_json(field(e, ep, "complex"), at(ep, "complex"), &c.ring);
  }
  i = 0;
  if (const Json* rj = optional_field(j, "restrictions"))
    for (const auto& e : array(*rj, "restrictions")) {
      const std::string ep = at("restrictions", i++);
      auto s = int_list(field(e, ep, "subset"), at(ep, "subset"));
      const int add = small_int(field(e, ep, "add"), at(ep, "add"));
      c.restrictions[{s, add}] = chain_map_from_json(field(e, ep, "blocks"), at(ep, "blocks"));
    }
  return c;
}

// ----------------------------------------------------------------- reports

Json module_to_json(const homalg::GradedModule& m) {
  Json j = Json::array();
  for (int k : m.degrees()) {
    const auto& c = m.at(k);
    Json e;
    e["degree"] = k;
    e["rank"] = c.rank;
    Json t = Json::array();
    for (const auto& x : c.torsion) t.push_back(big_json(x));
    e["torsion"] = t;
    if (!c.weights.empty()) {
      Json w = Json::object();
      for (auto [wt, r] : c.weights) w[std::to_string(wt)] = r;
      e["weights"] = w;
    }
    j.push_back(e);
  }
  return j;
}

Json spectral_sequence_to_json(const specseq::SpectralSequence& s) {
  Json j;
  j["ring"] = s.ring.to_string();
  j["min_level"] = s.min_level;
  j["max_level"] = s.max_level;
  j["stabilization_page"] = s.stabilization_page;
  j["truncated"] = s.truncated;
  Json pages = Json::array();
  for (const auto& pg : s.pages) {
    Json pj, cells = Json::array();
    pj["r"] = pg.r;
    for (const auto& [pq, d] : pg.dims) {
      if (!d) continue;
      Json c;
      c["p"] = pq.first;
      c["q"] = pq.second;
      c["dim"] = d;
      c["d_rank"] = pg.differential_rank(pq.first, pq.second);
      cells.push_back(c);
    }
    pj["cells"] = cells;
    pages.push_back(pj);
  }
  j["pages"] = pages;
  j["abutment"] = module_to_json(s.abutment);
  Json gr = Json::array();
  for (const auto& [pn, d] : s.abutment_graded) {
    if (!d) continue;
    Json c;
    c["p"] = pn.first;
    c["n"] = pn.second;
    c["dim"] = d;
    gr.push_back(c);
  }
  j["abutment_graded"] = gr;
  return j;
}

}  // namespace stratcoh::io
