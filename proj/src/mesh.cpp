#include "fvmbem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fvmbem {

double PrimalMesh::total_area() const {
    double a = 0.0;
    for (int t = 0; t < n_triangles(); ++t) a += tri_area(t);
    return a;
}

double PrimalMesh::h_max() const {
    double h = 0.0;
    for (const auto& tr : triangles)
        for (int k = 0; k < 3; ++k)
            h = std::max(h, dist(vertices[tr[k]], vertices[tr[(k + 1) % 3]]));
    return h;
}

double PrimalMesh::diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < boundary_vertices.size(); ++i)
        for (std::size_t j = i + 1; j < boundary_vertices.size(); ++j)
            d = std::max(d, dist(vertices[boundary_vertices[i]], vertices[boundary_vertices[j]]));
    return d;
}

std::array<Vec2, 3> PrimalMesh::hat_gradients(int t) const {
    const auto& tr = triangles[t];
    const Vec2 p0 = vertices[tr[0]], p1 = vertices[tr[1]], p2 = vertices[tr[2]];
    const double a2 = 2.0 * signed_area(p0, p1, p2);
    // grad of the hat at vertex k is the inward normal of the opposite edge
    // scaled by its length over twice the area.
    return {Vec2{(p1.y - p2.y) / a2, (p2.x - p1.x) / a2},
            Vec2{(p2.y - p0.y) / a2, (p0.x - p2.x) / a2},
            Vec2{(p0.y - p1.y) / a2, (p1.x - p0.x) / a2}};
}

PrimalMesh make_mesh(std::vector<Vec2> vertices,
                     std::vector<std::array<int, 3>> triangles,
                     double spacing) {
    PrimalMesh m;
    m.vertices = std::move(vertices);
    m.triangles = std::move(triangles);
    m.spacing = spacing;

    for (int t = 0; t < m.n_triangles(); ++t)
        if (m.tri_area(t) <= 0.0)
            throw config_error("make_mesh: degenerate or clockwise triangle");

    std::map<std::pair<int, int>, int> edge_of;
    m.tri_edges.assign(m.triangles.size(), {-1, -1, -1});
    for (int t = 0; t < m.n_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int a = m.triangles[t][k];
            const int b = m.triangles[t][(k + 1) % 3];
            const auto key = std::minmax(a, b);
            auto it = edge_of.find(key);
            if (it == edge_of.end()) {
                MeshEdge e;
                e.v = {key.first, key.second};
                e.tri[0] = t;
                it = edge_of.emplace(key, static_cast<int>(m.edges.size())).first;
                m.edges.push_back(e);
            } else {
                MeshEdge& e = m.edges[it->second];
                if (e.tri[1] >= 0)
                    throw config_error("make_mesh: non-conforming mesh, edge shared by >2 triangles");
                e.tri[1] = t;
            }
            m.tri_edges[t][k] = it->second;
        }
    }

    // Boundary edges carry the orientation induced by their unique triangle,
    // which traces the boundary counterclockwise.
    std::map<int, std::array<int, 2>> next_of; // start vertex -> (end vertex, boundary edge id)
    int n_bedges = 0;
    for (int t = 0; t < m.n_triangles(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const MeshEdge& e = m.edges[m.tri_edges[t][k]];
            if (!e.is_boundary()) continue;
            const int a = m.triangles[t][k];
            const int b = m.triangles[t][(k + 1) % 3];
            if (next_of.count(a))
                throw config_error("make_mesh: boundary is not a single loop");
            next_of[a] = {b, m.tri_edges[t][k]};
            ++n_bedges;
        }
    }
    if (n_bedges == 0) throw config_error("make_mesh: no boundary edges");

    int start = next_of.begin()->first;
    for (const auto& [v, _] : next_of) start = std::min(start, v);
    m.boundary_index_of_vertex.assign(m.vertices.size(), -1);
    int v = start;
    do {
        auto it = next_of.find(v);
        if (it == next_of.end())
            throw config_error("make_mesh: open boundary loop");
        m.boundary_edges.push_back({v, it->second[0]});
        m.boundary_edge_ids.push_back(it->second[1]);
        m.boundary_index_of_vertex[v] = static_cast<int>(m.boundary_vertices.size());
        m.boundary_vertices.push_back(v);
        v = it->second[0];
    } while (v != start);
    if (m.n_boundary_edges() != n_bedges)
        throw config_error("make_mesh: boundary has more than one loop");

    m.vertex_tris.assign(m.vertices.size(), {});
    for (int t = 0; t < m.n_triangles(); ++t)
        for (int k = 0; k < 3; ++k) m.vertex_tris[m.triangles[t][k]].push_back(t);

    if (m.diameter() >= 1.0)
        throw config_error("make_mesh: domain diameter must be < 1 (rescale the problem)");

    return m;
}

PrimalMesh build_uniform_square_mesh(const Vec2& corner, double side, double spacing) {
    if (spacing <= 0.0 || side <= 0.0)
        throw config_error("build_uniform_square_mesh: side and spacing must be positive");
    const double cells = side / spacing;
    const int n = static_cast<int>(std::lround(cells));
    if (n < 1 || std::abs(cells - n) > 1e-9)
        throw config_error("build_uniform_square_mesh: spacing does not tile the square");

    std::vector<Vec2> verts;
    verts.reserve((n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            verts.push_back({corner.x + side * i / n, corner.y + side * j / n});

    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    std::vector<std::array<int, 3>> tris;
    tris.reserve(2 * n * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return make_mesh(std::move(verts), std::move(tris), spacing);
}

PrimalMesh build_lshape_mesh(double spacing) {
    if (spacing <= 0.0)
        throw config_error("build_lshape_mesh: spacing must be positive");
    const double quarter = 0.25;
    const double cells = 2.0 * quarter / spacing;
    const int n = static_cast<int>(std::lround(cells));
    if (n < 2 || n % 2 != 0 || std::abs(cells - n) > 1e-9)
        throw config_error("build_lshape_mesh: spacing does not tile the L-shape");

    // Grid over the full square; cells in the excluded quadrant are skipped
    // and unused vertices compacted away.
    std::vector<int> vmap((n + 1) * (n + 1), -1);
    std::vector<Vec2> verts;
    std::vector<std::array<int, 3>> tris;
    auto gid = [n](int i, int j) { return j * (n + 1) + i; };
    auto use = [&](int i, int j) {
        int& idx = vmap[gid(i, j)];
        if (idx < 0) {
            idx = static_cast<int>(verts.size());
            verts.push_back({-quarter + spacing * i, -quarter + spacing * j});
        }
        return idx;
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double cx = -quarter + spacing * (i + 0.5);
            const double cy = -quarter + spacing * (j + 0.5);
            if (cx > 0.0 && cy < 0.0) continue;
            const int a = use(i, j), b = use(i + 1, j);
            const int c = use(i + 1, j + 1), d = use(i, j + 1);
            tris.push_back({a, b, c});
            tris.push_back({a, c, d});
        }
    }
    return make_mesh(std::move(verts), std::move(tris), spacing);
}

PrimalMesh refine_uniform(const PrimalMesh& mesh) {
    std::vector<Vec2> verts = mesh.vertices;
    std::vector<int> edge_mid(mesh.edges.size());
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const auto& ed = mesh.edges[e];
        edge_mid[e] = static_cast<int>(verts.size());
        verts.push_back((mesh.vertices[ed.v[0]] + mesh.vertices[ed.v[1]]) * 0.5);
    }
    std::vector<std::array<int, 3>> tris;
    tris.reserve(4 * mesh.triangles.size());
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const int m01 = edge_mid[mesh.tri_edges[t][0]];
        const int m12 = edge_mid[mesh.tri_edges[t][1]];
        const int m20 = edge_mid[mesh.tri_edges[t][2]];
        tris.push_back({tr[0], m01, m20});
        tris.push_back({m01, tr[1], m12});
        tris.push_back({m20, m12, tr[2]});
        tris.push_back({m01, m12, m20});
    }
    return make_mesh(std::move(verts), std::move(tris), mesh.spacing * 0.5);
}

double DualMesh::box_boundary_length(int vertex) const {
    const PrimalMesh& m = *primal;
    double len = 0.0;
    for (int k = 0; k < m.n_boundary_edges(); ++k)
        if (m.boundary_edges[k][0] == vertex || m.boundary_edges[k][1] == vertex)
            len += 0.5 * m.boundary_length(k);
    return len;
}

DualMesh build_dual(const PrimalMesh& mesh) {
    DualMesh dual;
    dual.primal = &mesh;
    dual.box_area.assign(mesh.n_vertices(), 0.0);
    dual.subquads.resize(mesh.n_triangles());
    dual.interfaces.resize(mesh.edges.size());

    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tr = mesh.triangles[t];
        const Vec2 z = mesh.barycenter(t);
        for (int k = 0; k < 3; ++k) {
            const Vec2 a = mesh.vertices[tr[k]];
            const Vec2 m_next = (a + mesh.vertices[tr[(k + 1) % 3]]) * 0.5;
            const Vec2 m_prev = (a + mesh.vertices[tr[(k + 2) % 3]]) * 0.5;
            dual.subquads[t][k] = {a, m_next, z, m_prev};
            // quad split along the diagonal a-z; both parts are median triangles
            dual.box_area[tr[k]] +=
                signed_area(a, m_next, z) + signed_area(a, z, m_prev);
        }
        // one interface segment per edge of t: edge midpoint to barycenter
        for (int k = 0; k < 3; ++k) {
            const int vi = tr[k];
            const int vj = tr[(k + 1) % 3];
            const Vec2 mid = (mesh.vertices[vi] + mesh.vertices[vj]) * 0.5;
            DualInterface& iface = dual.interfaces[mesh.tri_edges[t][k]];
            if (iface.n_segments == 0) {
                iface.vi = std::min(vi, vj);
                iface.vj = std::max(vi, vj);
            }
            DualSegment seg;
            seg.a = mid;
            seg.b = z;
            seg.tri = t;
            seg.length = dist(mid, z);
            if (seg.length <= 0.0)
                throw numerical_error("build_dual: degenerate dual segment");
            Vec2 n = rot_cw(z - mid);
            const Vec2 ij = mesh.vertices[iface.vj] - mesh.vertices[iface.vi];
            if (dot(n, ij) < 0.0) n = n * (-1.0);
            seg.normal = n / norm(n);
            iface.segments[iface.n_segments++] = seg;
            iface.total_length += seg.length;
        }
    }
    return dual;
}

BoundaryClassification classify_boundary(const PrimalMesh& mesh, const VectorField& b) {
    BoundaryClassification cls;
    cls.tag.resize(mesh.n_boundary_edges());
    for (int k = 0; k < mesh.n_boundary_edges(); ++k) {
        const double bn = dot(b(mesh.boundary_midpoint(k)), mesh.boundary_normal(k));
        cls.tag[k] = bn < 0.0 ? EdgeFlow::inflow : EdgeFlow::outflow;
    }
    return cls;
}

} // namespace fvmbem
