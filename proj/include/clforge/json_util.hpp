#pragma once

#include <cstdint>

#include "clforge/field_tower.hpp"
#include "clforge/vector_space.hpp"
#include "json.hpp"

namespace clforge {

using json = nlohmann::ordered_json;

/// {log, poly} for an element of F_{q^3}; log is null for zero.
inline json elem_json(const FieldCtx& ctx, ExtElem e) {
  json j;
  j["log"] = e.v == 0 ? json(nullptr) : json(ctx.log(e));
  j["poly"] = ctx.poly_coeffs(e);
  return j;
}

/// {log, poly} for an element of F_q, log taken base w^N.
inline json base_json(const FieldCtx& ctx, BaseElem e) {
  json j;
  j["log"] = e.v == 0 ? json(nullptr) : json(ctx.log(e));
  j["poly"] = ctx.poly_coeffs(e);
  return j;
}

template <class Range>
json index_list(const Range& r) {
  json out = json::array();
  for (const auto& c : r) out.push_back(c.v);
  return out;
}

/// F_q coordinates of a point of PG(5, q) given by its code.
inline json point_json(const FieldCtx& ctx, std::uint64_t code) { return index_list(unpack(ctx, code, 6)); }

inline json field_json(const FieldCtx& ctx) {
  json j;
  j["p"] = ctx.p();
  j["n"] = ctx.n();
  j["q"] = ctx.q();
  j["ext_poly"] = ctx.ext_poly();
  j["base_poly"] = ctx.base_poly();
  j["primitive"] = ctx.poly_coeffs(ctx.primitive());
  return j;
}

}  // namespace clforge
