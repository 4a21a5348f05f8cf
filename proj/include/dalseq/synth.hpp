#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dalseq/ingest.hpp"
#include "dalseq/types.hpp"

namespace dalseq {

// What the generator plants into malicious apps.
//
// None: structure only, no label signal beyond what PathMode adds.
//
// MarkerEveryUnit: a marker token in 100% of malicious units at the chosen
// granularity and in no benign unit; trivially separable ground truth.
//
// MultiScopePattern: co-occurrence pairs planted at block, method and class
// scope in every malicious class. Each marker token also appears in benign
// apps at a matched rate, but only one distinct marker per benign class, so
// single tokens are uninformative and wider units see strictly more signal.
enum class PlantMode { None, MarkerEveryUnit, MultiScopePattern };

// How invoke descriptors are emitted.
//
// Neutral: single-token descriptors with shared label-independent paths.
//
// Correlated: the class path comes from a per-label pool and is emitted as
// its own token ("L...; ->name()V" with the separating space), so path
// information is present and learnable.
//
// Randomized: a fresh random path is folded into the descriptor token per
// occurrence, carrying no label information.
enum class PathMode { Neutral, Correlated, Randomized };

struct SynthSpec {
  size_t benign_apps = 40;
  size_t malicious_apps = 40;
  size_t classes_per_app = 3;
  size_t methods_per_class = 4;
  size_t blocks_per_method = 2;
  size_t instr_per_block = 2;  // filler lines per block; a terminator follows
  double invoke_fraction = 0.5;  // chance a non-final block ends in invoke-
  PlantMode plant = PlantMode::None;
  UnitKind marker_unit = UnitKind::Bsm;  // granularity for MarkerEveryUnit
  std::string marker_token = "MALSIG";
  PathMode paths = PathMode::Neutral;
  uint64_t seed = 1;
};

// Apktool-dialect documents in normalized form (what ingest would produce),
// deterministic in spec.seed. App ids are ben0000... / mal0000...
std::vector<RawDocument> generate_corpus(const SynthSpec& spec);

DatasetManifest manifest_of(const std::vector<RawDocument>& docs);

}  // namespace dalseq
