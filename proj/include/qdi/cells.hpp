#ifndef QDI_CELLS_HPP
#define QDI_CELLS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "qdi/errors.hpp"

namespace qdi {

// Cell vocabulary. C2 is the 2-input Muller C-element, the only stateful
// kind; every other kind is a plain combinational gate.
enum class CellKind : uint8_t {
  And2,
  Or2,
  Inv,
  Ao22,
  Oa22,
  Ao222,
  Oa222,
  C2,
};

inline constexpr int kNumCellKinds = 8;

inline constexpr std::array<CellKind, kNumCellKinds> all_cell_kinds = {
    CellKind::And2,  CellKind::Or2,   CellKind::Inv, CellKind::Ao22,
    CellKind::Oa22,  CellKind::Ao222, CellKind::Oa222, CellKind::C2,
};

constexpr int arity(CellKind k) {
  switch (k) {
    case CellKind::Inv:
      return 1;
    case CellKind::And2:
    case CellKind::Or2:
    case CellKind::C2:
      return 2;
    case CellKind::Ao22:
    case CellKind::Oa22:
      return 4;
    case CellKind::Ao222:
    case CellKind::Oa222:
      return 6;
  }
  return 0;
}

constexpr bool is_stateful(CellKind k) { return k == CellKind::C2; }

// Boolean duality map. AND<->OR, AO<->OA; INV and C2 are self-dual.
constexpr CellKind dual_of(CellKind k) {
  switch (k) {
    case CellKind::And2:
      return CellKind::Or2;
    case CellKind::Or2:
      return CellKind::And2;
    case CellKind::Ao22:
      return CellKind::Oa22;
    case CellKind::Oa22:
      return CellKind::Ao22;
    case CellKind::Ao222:
      return CellKind::Oa222;
    case CellKind::Oa222:
      return CellKind::Ao222;
    case CellKind::Inv:
      return CellKind::Inv;
    case CellKind::C2:
      return CellKind::C2;
  }
  return k;
}

std::string_view cell_kind_name(CellKind k);

// Parses a kind name ("AND2", "AO222", ...). Throws ParseError on an
// unknown name.
CellKind cell_kind_from_name(std::string_view name);

// Evaluates one cell. `inputs` length must equal arity(kind); `prev_out`
// is the cell's currently held output and matters only for C2: equal
// inputs drive the output to that value, unequal inputs keep prev_out.
bool eval_cell(CellKind kind, std::span<const bool> inputs, bool prev_out);

struct CellSpec {
  CellKind kind;
  double area = 0.0;   // square micrometers
  double delay = 0.0;  // abstract delay units, applied to any output edge
};

// Area/delay table keyed by cell kind. The default table uses the unit
// delay model and per-kind areas in which dual gate pairs share an area;
// the C-element is costed as the AO222 it is built from.
class CellLibrary {
 public:
  // All eight kinds populated: AND2/OR2 2.03, AO22/OA22 2.54,
  // AO222/OA222 3.3, C2 3.3, INV 1.0; delay 1.0 everywhere.
  static CellLibrary defaults();

  // Loads a table from JSON text: {"AND2": {"area": 2.03, "delay": 1.0}, ...}.
  // Only the kinds named in the file are populated.
  static CellLibrary from_json(const std::string& text);

  static CellLibrary from_file(const std::string& path);

  bool has(CellKind k) const { return present_[static_cast<size_t>(k)]; }

  // Throws ConfigError if the kind has no entry.
  CellSpec spec(CellKind k) const;

  double area(CellKind k) const { return spec(k).area; }
  double delay(CellKind k) const { return spec(k).delay; }

  void set(CellKind k, double area, double delay);

 private:
  std::array<CellSpec, kNumCellKinds> specs_{};
  std::array<bool, kNumCellKinds> present_{};
};

}  // namespace qdi

#endif
