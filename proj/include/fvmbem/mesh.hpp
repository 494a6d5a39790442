#pragma once

#include <array>
#include <vector>

#include "fvmbem/common.hpp"

namespace fvmbem {

/// Undirected primal edge with its (up to two) adjacent triangles.
struct MeshEdge {
    std::array<int, 2> v{-1, -1};
    std::array<int, 2> tri{-1, -1};
    bool is_boundary() const { return tri[1] < 0; }
};

/// Conforming triangulation of a polygonal domain with diameter < 1.
///
/// Triangles are counterclockwise; the boundary is a single closed loop
/// traced counterclockwise (domain on the left), so the outward normal of a
/// boundary edge is the clockwise rotation of its direction.
struct PrimalMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<MeshEdge> edges;
    /// edge id between local vertices (k, k+1 mod 3) of each triangle
    std::vector<std::array<int, 3>> tri_edges;

    /// Ordered vertex pairs tracing the boundary loop counterclockwise.
    std::vector<std::array<int, 2>> boundary_edges;
    /// Underlying edge id of each boundary edge.
    std::vector<int> boundary_edge_ids;
    /// boundary_vertices[k] == boundary_edges[k][0]; one entry per edge.
    std::vector<int> boundary_vertices;
    /// Position of a vertex in boundary_vertices, or -1 for interior vertices.
    std::vector<int> boundary_index_of_vertex;

    std::vector<std::vector<int>> vertex_tris;

    /// Grid spacing of the structured builders (halved by refinement).
    double spacing = 0.0;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
    int n_boundary_edges() const { return static_cast<int>(boundary_edges.size()); }

    double tri_area(int t) const {
        const auto& tr = triangles[t];
        return signed_area(vertices[tr[0]], vertices[tr[1]], vertices[tr[2]]);
    }
    Vec2 barycenter(int t) const {
        const auto& tr = triangles[t];
        return (vertices[tr[0]] + vertices[tr[1]] + vertices[tr[2]]) / 3.0;
    }
    double total_area() const;
    /// Max triangle diameter.
    double h_max() const;
    /// Domain diameter (max pairwise boundary-vertex distance).
    double diameter() const;

    Vec2 boundary_midpoint(int k) const {
        return (vertices[boundary_edges[k][0]] + vertices[boundary_edges[k][1]]) * 0.5;
    }
    double boundary_length(int k) const {
        return dist(vertices[boundary_edges[k][0]], vertices[boundary_edges[k][1]]);
    }
    Vec2 boundary_normal(int k) const {
        const Vec2 d = vertices[boundary_edges[k][1]] - vertices[boundary_edges[k][0]];
        return rot_cw(d) / norm(d);
    }

    /// Gradients of the three nodal hat functions on triangle t.
    std::array<Vec2, 3> hat_gradients(int t) const;
};

/// Builds adjacency and boundary data from vertices + triangles and checks
/// the construction invariants (orientation, conformity, closed boundary
/// loop, diameter < 1).
PrimalMesh make_mesh(std::vector<Vec2> vertices,
                     std::vector<std::array<int, 3>> triangles,
                     double spacing = 0.0);

/// Structured triangulation of the axis-aligned square [corner, corner+side]^2;
/// every cell is split along the same bottom-left-to-top-right diagonal.
PrimalMesh build_uniform_square_mesh(const Vec2& corner, double side, double spacing);

/// Structured triangulation of (-1/4,1/4)^2 minus the closed fourth-quadrant
/// square; the reentrant corner (0,0) is a mesh vertex.
PrimalMesh build_lshape_mesh(double spacing);

/// Red refinement: each triangle is split into 4 congruent children.
PrimalMesh refine_uniform(const PrimalMesh& mesh);

/// Straight piece of a dual-box boundary with unit normal pointing from the
/// box of vertex vi towards the box of vertex vj.
struct DualSegment {
    Vec2 a, b;
    Vec2 normal;
    double length = 0.0;
    /// Triangle containing the segment.
    int tri = -1;
};

/// Interface between the boxes of the two endpoints of a primal edge: one
/// midpoint-to-barycenter segment per adjacent triangle.
struct DualInterface {
    int vi = -1, vj = -1;
    int n_segments = 0;
    std::array<DualSegment, 2> segments;
    double total_length = 0.0;
};

/// Vertex-centered box mesh: one control volume per primal vertex, built from
/// triangle barycenters and edge midpoints.
struct DualMesh {
    const PrimalMesh* primal = nullptr;
    std::vector<double> box_area;
    /// Per (triangle, local vertex): quadrilateral (a_i, m_ij, z_K, m_ki).
    std::vector<std::array<std::array<Vec2, 4>, 3>> subquads;
    /// Indexed by primal edge id.
    std::vector<DualInterface> interfaces;

    double box_boundary_length(int vertex) const;
};

DualMesh build_dual(const PrimalMesh& mesh);

enum class EdgeFlow { inflow, outflow };

/// Per boundary edge: inflow (b·n < 0 at the midpoint) or outflow.
struct BoundaryClassification {
    std::vector<EdgeFlow> tag;
};

BoundaryClassification classify_boundary(const PrimalMesh& mesh, const VectorField& b);

} // namespace fvmbem
