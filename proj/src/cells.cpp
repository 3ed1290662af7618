#include "qdi/cells.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qdi {

namespace {

constexpr std::string_view kKindNames[kNumCellKinds] = {
    "AND2", "OR2", "INV", "AO22", "OA22", "AO222", "OA222", "C2",
};

}  // namespace

std::string_view cell_kind_name(CellKind k) {
  return kKindNames[static_cast<size_t>(k)];
}

CellKind cell_kind_from_name(std::string_view name) {
  for (int i = 0; i < kNumCellKinds; ++i) {
    if (kKindNames[i] == name) return static_cast<CellKind>(i);
  }
  throw ParseError("unknown cell kind '" + std::string(name) + "'");
}

bool eval_cell(CellKind kind, std::span<const bool> in, bool prev_out) {
  if (static_cast<int>(in.size()) != arity(kind)) {
    throw InputError("eval_cell: " + std::string(cell_kind_name(kind)) +
                     " takes " + std::to_string(arity(kind)) +
                     " inputs, got " + std::to_string(in.size()));
  }
  switch (kind) {
    case CellKind::And2:
      return in[0] && in[1];
    case CellKind::Or2:
      return in[0] || in[1];
    case CellKind::Inv:
      return !in[0];
    case CellKind::Ao22:
      return (in[0] && in[1]) || (in[2] && in[3]);
    case CellKind::Oa22:
      return (in[0] || in[1]) && (in[2] || in[3]);
    case CellKind::Ao222:
      return (in[0] && in[1]) || (in[2] && in[3]) || (in[4] && in[5]);
    case CellKind::Oa222:
      return (in[0] || in[1]) && (in[2] || in[3]) && (in[4] || in[5]);
    case CellKind::C2:
      return in[0] == in[1] ? in[0] : prev_out;
  }
  return false;
}

CellLibrary CellLibrary::defaults() {
  CellLibrary lib;
  lib.set(CellKind::And2, 2.03, 1.0);
  lib.set(CellKind::Or2, 2.03, 1.0);
  lib.set(CellKind::Inv, 1.0, 1.0);
  lib.set(CellKind::Ao22, 2.54, 1.0);
  lib.set(CellKind::Oa22, 2.54, 1.0);
  lib.set(CellKind::Ao222, 3.3, 1.0);
  lib.set(CellKind::Oa222, 3.3, 1.0);
  lib.set(CellKind::C2, 3.3, 1.0);
  return lib;
}

CellLibrary CellLibrary::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("cell library: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("cell library: expected an object");
  CellLibrary lib;
  for (auto it = j.begin(); it != j.end(); ++it) {
    CellKind k = cell_kind_from_name(it.key());
    const auto& entry = it.value();
    if (!entry.contains("area") || !entry.contains("delay")) {
      throw ParseError("cell library: entry for " + it.key() +
                       " needs 'area' and 'delay'");
    }
    double area = entry["area"].get<double>();
    double delay = entry["delay"].get<double>();
    if (area <= 0.0) throw ConfigError("cell library: area must be > 0");
    if (delay < 0.0) throw ConfigError("cell library: delay must be >= 0");
    lib.set(k, area, delay);
  }
  return lib;
}

CellLibrary CellLibrary::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cell library file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

CellSpec CellLibrary::spec(CellKind k) const {
  if (!has(k)) {
    throw ConfigError("cell library has no entry for " +
                      std::string(cell_kind_name(k)));
  }
  return specs_[static_cast<size_t>(k)];
}

void CellLibrary::set(CellKind k, double area, double delay) {
  specs_[static_cast<size_t>(k)] = CellSpec{k, area, delay};
  present_[static_cast<size_t>(k)] = true;
}

}  // namespace qdi
