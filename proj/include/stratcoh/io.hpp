#pragma once

#include <string>

#include <json.hpp>

#include "stratcoh/complex.hpp"
#include "stratcoh/generators.hpp"
#include "stratcoh/poset.hpp"
#include "stratcoh/specseq.hpp"
#include "stratcoh/strat.hpp"

/// Structured text documents (JSON). Every `*_from_json` throws ParseError
/// naming the offending field path; `parse_document` adds line and column on
/// syntax errors. Emission is deterministic and loading an emitted document
/// gives back an equal value.
namespace stratcoh::io {

using Json = nlohmann::ordered_json;

Json parse_document(const std::string& text);
std::string dump(const Json& j);

/// {"elements": [...], "covers": [[a, b], ...]}; optional "sigma": {id: value}.
Json poset_to_json(const poset::Poset& p);
poset::Poset poset_from_json(const Json& j);
poset::IncreasingFunction sigma_from_json(const Json& j, const poset::Poset& p, const std::string& path = "sigma");

Json matrix_to_json(const SparseMatrix& m);
SparseMatrix matrix_from_json(const Json& j, const std::string& path);

/// {"ring", "lo", "ranks", "differentials": [{"degree", "entries": [[row, col, value]]}], "weights"?}
Json complex_to_json(const homalg::CochainComplex& c);
homalg::CochainComplex complex_from_json(const Json& j, const std::string& path = "complex",
                                         const Ring* default_ring = nullptr);

/// [{"degree", "rows", "cols", "entries"}]
Json chain_map_to_json(const homalg::ChainMap& f);
homalg::ChainMap chain_map_from_json(const Json& j, const std::string& path);

/// "stratcoh-model": poset block, complexes by reference id, restrictions on
/// covers, σ table, optional group generators.
Json model_to_json(const strat::StratifiedSpaceModel& m);
strat::StratifiedSpaceModel model_from_json(const Json& j);

Json pattern_to_json(const generators::DiagonalPattern& p);
generators::DiagonalPattern pattern_from_json(const Json& j);

Json arrangement_to_json(const generators::SubspaceArrangementSpec& s);
generators::SubspaceArrangementSpec arrangement_from_json(const Json& j);

Json space_to_json(const generators::SpaceModel& m);
generators::SpaceModel space_from_json(const Json& j);

Json snc_to_json(const generators::SncComponents& c);
generators::SncComponents snc_from_json(const Json& j);

// Reports (emit only).
Json module_to_json(const homalg::GradedModule& m);
Json spectral_sequence_to_json(const specseq::SpectralSequence& s);

std::string integer_string(const Integer& v);

}  // namespace stratcoh::io
