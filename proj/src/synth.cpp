#include "dalseq/synth.hpp"

#include <array>
#include <cstdio>

#include "dalseq/rng.hpp"

namespace dalseq {

namespace {

std::string format(const char* fmt, auto... args) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// Shared pools. Both labels draw from the same pools with the same
// distribution; only PathMode::Correlated introduces label dependence, and
// only in the descriptor path.
const std::array<const char*, 12> kBenignPaths = {
    "Lui/widget/ListPane",      "Lui/widget/TextCell",
    "Lui/layout/GridBox",       "Lio/storage/PrefStore",
    "Lio/storage/FileCache",    "Lmedia/image/Loader",
    "Lmedia/sound/Player",      "Lnet/http/Client",
    "Lui/theme/Palette",        "Lio/log/Tracer",
    "Lmedia/video/Surface",     "Lui/input/Gesture"};

const std::array<const char*, 12> kMaliciousPaths = {
    "Lsys/priv/Escalate",     "Lnet/exfil/Uploader",
    "Lsms/premium/Sender",    "Lsys/hide/IconMask",
    "Lcrypt/lock/Scrambler",  "Lnet/cmd/Beacon",
    "Lsys/boot/Persist",      "Lcontacts/dump/Reader",
    "Lnet/exfil/Packer",      "Lsms/intercept/Hook",
    "Lsys/priv/ShellRunner",  "Lcrypt/key/Fetcher"};

const std::array<const char*, 8> kCallNames = {
    "run",   "init", "apply", "handle", "bind", "query", "update", "close"};

struct LineEmitter {
  const SynthSpec& spec;
  Label label;
  CounterRng& structure;
  CounterRng& path_values;
  std::vector<std::string>& out;

  std::string invoke_descriptor() {
    const char* name = kCallNames[structure.next_below(kCallNames.size())];
    switch (spec.paths) {
      case PathMode::Neutral: {
        // Shared path pool, no label dependence.
        const char* path = kBenignPaths[structure.next_below(kBenignPaths.size())];
        return format("%s;->%s()V", path, name);
      }
      case PathMode::Correlated: {
        const auto& pool =
            label == Label::Malicious ? kMaliciousPaths : kBenignPaths;
        const char* path = pool[path_values.next_below(pool.size())];
        // Path as its own token, the way apktool dumps print it.
        return format("%s; ->%s()V", path, name);
      }
      case PathMode::Randomized: {
        uint64_t tag = path_values.next_u64() & 0xffffffff;
        return format("Lx%08llx/Gen;->%s()V",
                      static_cast<unsigned long long>(tag), name);
      }
    }
    return {};
  }

  void filler_line() {
    switch (structure.next_below(5)) {
      case 0:
        out.push_back(format("const/4 v%d, 0x%d", int(structure.next_below(8)),
                             int(structure.next_below(8))));
        break;
      case 1:
        out.push_back(format("const/16 v%d, 0x%x",
                             int(structure.next_below(8)),
                             int(structure.next_below(256))));
        break;
      case 2:
        out.push_back(format("move v%d, v%d", int(structure.next_below(8)),
                             int(structure.next_below(8))));
        break;
      case 3:
        out.push_back(format("add-int v%d, v%d, v%d",
                             int(structure.next_below(8)),
                             int(structure.next_below(8)),
                             int(structure.next_below(8))));
        break;
      default:
        out.push_back(format("const-string v%d, W%02d",
                             int(structure.next_below(8)),
                             int(structure.next_below(40))));
        break;
    }
  }

  void marker_line(const std::string& token) {
    out.push_back("const-string v9, " + token);
  }

  void terminator_line(bool method_final) {
    if (method_final) {
      out.push_back("return-void");
      return;
    }
    bool invoke = structure.next_unit() < spec.invoke_fraction;
    if (invoke) {
      int regs = int(structure.next_below(3));
      std::string group = regs == 0 ? "{}" : regs == 1 ? "{v0}" : "{v0, v1}";
      out.push_back("invoke-virtual " + group + ", " + invoke_descriptor());
    } else if (structure.next_below(2) == 0) {
      out.push_back(format("goto :L%d", int(structure.next_below(16))));
    } else {
      out.push_back(format("if-eqz v%d, :L%d", int(structure.next_below(8)),
                           int(structure.next_below(16))));
    }
  }
};

// Markers planted by MultiScopePattern. The BLK pair shares a block, the
// MTH pair shares a method across blocks, the CLS pair shares a class
// across methods.
const std::array<const char*, 6> kScopeMarkers = {"BLK_A", "BLK_B", "MTH_A",
                                                  "MTH_B", "CLS_A", "CLS_B"};

}  // namespace

std::vector<RawDocument> generate_corpus(const SynthSpec& spec) {
  if (spec.plant == PlantMode::MultiScopePattern &&
      (spec.methods_per_class < 4 || spec.blocks_per_method < 2)) {
    throw Error(ErrorKind::Usage,
                "MultiScopePattern needs >= 4 methods/class and >= 2 "
                "blocks/method");
  }
  if (spec.instr_per_block < 1 || spec.blocks_per_method < 1 ||
      spec.methods_per_class < 1 || spec.classes_per_app < 1) {
    throw Error(ErrorKind::Usage, "corpus shape values must be >= 1");
  }

  std::vector<RawDocument> docs;
  size_t total = spec.benign_apps + spec.malicious_apps;
  docs.reserve(total);

  for (size_t app = 0; app < total; ++app) {
    bool malicious = app >= spec.benign_apps;
    RawDocument doc;
    doc.label = malicious ? Label::Malicious : Label::Benign;
    doc.dialect = Dialect::Apktool;
    doc.app_id = format("%s%04d", malicious ? "mal" : "ben",
                        int(malicious ? app - spec.benign_apps : app));

    CounterRng structure(spec.seed, CounterRng::mix(kStreamSynth) + app);
    CounterRng path_values(spec.seed,
                           CounterRng::mix(kStreamSynth + 1) + app);
    CounterRng marker_rng(spec.seed, CounterRng::mix(kStreamSynth + 2) + app);
    LineEmitter emit{spec, doc.label, structure, path_values, doc.lines};

    for (size_t cls = 0; cls < spec.classes_per_app; ++cls) {
      doc.lines.push_back(format(".class public L%s/C%d;",
                                 doc.app_id.c_str(), int(cls)));

      // Benign classes under MultiScopePattern carry one distinct marker,
      // repeated once per (method, block) slot in round-robin order, to
      // match the malicious per-marker rate without ever co-locating two
      // distinct markers.
      size_t benign_marker =
          marker_rng.next_below(kScopeMarkers.size());
      size_t benign_insertions = 0;

      for (size_t m = 0; m < spec.methods_per_class; ++m) {
        doc.lines.push_back(format(".method public m%d()V", int(m)));
        for (size_t blk = 0; blk < spec.blocks_per_method; ++blk) {
          if (spec.plant == PlantMode::MultiScopePattern) {
            if (malicious) {
              if (m == 0 && blk == 0) {
                emit.marker_line("BLK_A");
                emit.marker_line("BLK_B");
              } else if (m == 1 && blk == 0) {
                emit.marker_line("MTH_A");
              } else if (m == 1 && blk == 1) {
                emit.marker_line("MTH_B");
              } else if (m == 2 && blk == 0) {
                emit.marker_line("CLS_A");
              } else if (m == 3 && blk == 0) {
                emit.marker_line("CLS_B");
              }
            } else if (benign_insertions < kScopeMarkers.size()) {
              emit.marker_line(kScopeMarkers[benign_marker]);
              ++benign_insertions;
            }
          }
          if (spec.plant == PlantMode::MarkerEveryUnit && malicious) {
            bool plant_here =
                (spec.marker_unit == UnitKind::Bsm) ||
                (spec.marker_unit == UnitKind::Msm && blk == 0) ||
                (spec.marker_unit == UnitKind::Csm && m == 0 && blk == 0);
            if (plant_here) emit.marker_line(spec.marker_token);
          }
          for (size_t i = 0; i < spec.instr_per_block; ++i) {
            if (spec.plant == PlantMode::MarkerEveryUnit && malicious &&
                spec.marker_unit == UnitKind::Ism) {
              emit.marker_line(spec.marker_token);
            } else {
              emit.filler_line();
            }
          }
          bool method_final = blk + 1 == spec.blocks_per_method;
          emit.terminator_line(method_final);
        }
        doc.lines.push_back(".end method");
      }
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

DatasetManifest manifest_of(const std::vector<RawDocument>& docs) {
  DatasetManifest manifest;
  for (const auto& d : docs) {
    ManifestEntry e;
    e.app_id = d.app_id;
    e.label = d.label;
    e.dialect = d.dialect;
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

}  // namespace dalseq
