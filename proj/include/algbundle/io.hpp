#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "algbundle/algebra.hpp"
#include "algbundle/cohomology.hpp"
#include "algbundle/connection.hpp"
#include "algbundle/family.hpp"
#include "algbundle/variety.hpp"

// JSON documents. Tensors are nested arrays alpha[i][j][k] (0-based in the
// file, entry alpha[i-1][j-1][k-1] = alpha_ij^k), matrices are row-major
// arrays of rows. Readers throw InputError on any shape or type mismatch.
namespace algbundle::io {

using nlohmann::json;

json parse(std::string_view text);
/// Canonical text form: compact, shortest round-trip doubles, trailing newline.
std::string dump(const json& doc);

json to_json(const StructureConstants& a);
StructureConstants algebra_from_json(const json& doc);

json to_json(const BilinearMapTensor& f);
BilinearMapTensor cochain_from_json(const json& doc);

json to_json(const EndomorphismMatrix& g);
EndomorphismMatrix endomorphism_from_json(const json& doc);

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& rows, const char* what);

json to_json(const BaseGrid& base);
BaseGrid base_from_json(const json& doc);

json to_json(const AlgebraFamily& family);
AlgebraFamily family_from_json(const json& doc);

json to_json(const Section& s);
Section section_from_json(const json& doc);

json to_json(const PathConnection& c);
PathConnection path_connection_from_json(const json& doc);

json to_json(const TransportMap& t);
TransportMap transport_from_json(const json& doc);

json to_json(const IsoSignature& s);
json to_json(const ProjectionReport& r);
json to_json(const ClassifyReport& r);

/// Map for pullback: { "base": {...}, "points": [[u] or [u, v], ...] }.
struct PullbackMap {
  BaseGrid base;
  std::vector<BasePoint> points;
};
PullbackMap pullback_map_from_json(const json& doc);

}  // namespace algbundle::io
