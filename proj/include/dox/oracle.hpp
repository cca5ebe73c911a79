#pragma once

#include <cstddef>
#include <vector>

#include "dox/archetypes.hpp"
#include "dox/corpus.hpp"
#include "dox/metric.hpp"
#include "dox/pertinence.hpp"

namespace dox {

inline constexpr std::size_t kOracleMaxDetails = 50;
inline constexpr std::size_t kOracleMaxAspects = 5;
inline constexpr std::size_t kOracleMaxArchetypes = 25;

// Straight-line reference for compute_dox: loops over aspects x archetypes x
// details with no graph, no index and no pre-embedding. Only extraction,
// normalization and the engine's pertinence/similarity are shared with the
// main pipeline. Throws SizeError above the desk-scale limits.
DoXResult oracle_dox(const Corpus& corpus, const RunParams& params,
                     const std::vector<Archetype>& archetypes, PertinenceEngine& engine);

// Same, starting from triplets instead of a corpus.
DoXResult oracle_dox(const std::vector<TemplateTriplet>& triplets, const RunParams& params,
                     const std::vector<Archetype>& archetypes, PertinenceEngine& engine);

}  // namespace dox
