#pragma once

#include <stdexcept>
#include <string>

namespace dalseq {

enum class Label { Benign, Malicious };

// Disassembler flavor of an input file. Auto is only valid in manifests;
// every loaded document carries a resolved dialect.
enum class Dialect { Auto, Jeb, Ida, Apktool };

// Granularity of one training sequence.
enum class UnitKind { Ism, Bsm, Msm, Csm };

enum class ErrorKind {
  MissingFile,
  MalformedEntry,
  DuplicateAppId,
  EmptyCorpus,
  Undecidable,
  EmptyTrainingSet,
  TooFewApps,
  IdOutOfRange,
  EmptyTable,
  UnknownExperiment,
  BadFormat,
  Usage,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

std::string to_string(Label v);
std::string to_string(Dialect v);
std::string to_string(UnitKind v);

// Case-insensitive parses; throw Error(BadFormat) on unknown values.
Label parse_label(const std::string& s);
Dialect parse_dialect(const std::string& s);
UnitKind parse_unit_kind(const std::string& s);

}  // namespace dalseq
