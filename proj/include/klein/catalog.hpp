#pragma once

// Named faces and the face JSON format {"vertices": [[x, y, z], ...]}.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "klein/lattice.hpp"

namespace klein {

struct FaceCatalogEntry {
    std::string id;
    LatticeFace face;
    Integer ls;  // integer area
    Integer ld;  // integer distance
    std::string source;
};

/// Triangle (0,0,1), (n,0,1), (0,n,1).
FaceCatalogEntry triangle_a(int n);
/// Square (0,0,1), (n,0,1), (n,n,1), (0,n,1).
FaceCatalogEntry square_b(int n);

/// Fixed entries: T1, T2, Q1, T1d2, Q1d2, T3i.
const std::vector<FaceCatalogEntry>& face_catalog();

/// Fixed entries plus A<n> and B<n> for n >= 1.
std::optional<FaceCatalogEntry> find_catalog_entry(std::string_view id);

/// Recomputes ls and ld of every fixed entry; returns the ids that disagree.
std::vector<std::string> verify_catalog();

/// Throws ErrorKind::parse_error for malformed JSON and FaceError for
/// polygons violating a face invariant.
LatticeFace face_from_json(std::string_view text);
std::string face_to_json(const LatticeFace& face);

}  // namespace klein
