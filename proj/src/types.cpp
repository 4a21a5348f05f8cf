#include "dalseq/types.hpp"

#include <algorithm>
#include <cctype>

namespace dalseq {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

std::string to_string(Label v) {
  return v == Label::Benign ? "benign" : "malicious";
}

std::string to_string(Dialect v) {
  switch (v) {
    case Dialect::Auto:
      return "auto";
    case Dialect::Jeb:
      return "jeb";
    case Dialect::Ida:
      return "ida";
    case Dialect::Apktool:
      return "apktool";
  }
  return "auto";
}

std::string to_string(UnitKind v) {
  switch (v) {
    case UnitKind::Ism:
      return "ism";
    case UnitKind::Bsm:
      return "bsm";
    case UnitKind::Msm:
      return "msm";
    case UnitKind::Csm:
      return "csm";
  }
  return "ism";
}

Label parse_label(const std::string& s) {
  std::string v = lower(s);
  if (v == "benign") return Label::Benign;
  if (v == "malicious") return Label::Malicious;
  throw Error(ErrorKind::BadFormat, "unknown label: " + s);
}

Dialect parse_dialect(const std::string& s) {
  std::string v = lower(s);
  if (v == "auto") return Dialect::Auto;
  if (v == "jeb") return Dialect::Jeb;
  if (v == "ida") return Dialect::Ida;
  if (v == "apktool") return Dialect::Apktool;
  throw Error(ErrorKind::BadFormat, "unknown dialect: " + s);
}

UnitKind parse_unit_kind(const std::string& s) {
  std::string v = lower(s);
  if (v == "ism") return UnitKind::Ism;
  if (v == "bsm") return UnitKind::Bsm;
  if (v == "msm") return UnitKind::Msm;
  if (v == "csm") return UnitKind::Csm;
  throw Error(ErrorKind::BadFormat, "unknown unit kind: " + s);
}

}  // namespace dalseq
