#include "alesupg/mesh_generation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

namespace alesupg {

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

// > 0 when d lies strictly inside the circumcircle of the ccw triangle abc.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 ab = b - a;
    const Vec2 ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    const double ab2 = dot(ab, ab);
    const double ac2 = dot(ac, ac);
    return a + Vec2{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
}

bool in_diametral_circle(const Vec2& a, const Vec2& b, const Vec2& p) {
    // Strictly inside: angle apb is obtuse.
    return dot(a - p, b - p) < -1e-14 * dot(b - a, b - a);
}

struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb;  // neighbour across the edge opposite v[i]; -1 on the hull
    bool alive;
};

// Uniform bucket grid over the bounding box for point proximity queries.
class PointGrid {
public:
    PointGrid(Vec2 lo, Vec2 hi, double cell) : lo_(lo), cell_(cell) {
        nx_ = std::max(1, static_cast<int>(std::ceil((hi.x - lo.x) / cell)) + 1);
        ny_ = std::max(1, static_cast<int>(std::ceil((hi.y - lo.y) / cell)) + 1);
        buckets_.resize(static_cast<std::size_t>(nx_) * ny_);
    }

    void insert(int id, const Vec2& p) { buckets_[index(cx(p.x), cy(p.y))].push_back(id); }
    void erase(int id, const Vec2& p) {
        auto& b = buckets_[index(cx(p.x), cy(p.y))];
        b.erase(std::find(b.begin(), b.end(), id));
    }

    template <class F>
    void visit(const Vec2& lo, const Vec2& hi, F&& fn) const {
        for (int j = cy(lo.y); j <= cy(hi.y); ++j) {
            for (int i = cx(lo.x); i <= cx(hi.x); ++i) {
                for (int id : buckets_[index(i, j)]) fn(id);
            }
        }
    }

private:
    int cx(double x) const { return std::clamp(static_cast<int>((x - lo_.x) / cell_), 0, nx_ - 1); }
    int cy(double y) const { return std::clamp(static_cast<int>((y - lo_.y) / cell_), 0, ny_ - 1); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

    Vec2 lo_;
    double cell_;
    int nx_{1};
    int ny_{1};
    std::vector<std::vector<int>> buckets_;
};

class Refiner {
public:
    Refiner(const Pslg& pslg, const RefinementOptions& options);
    Mesh build();

private:
    struct SubSegment {
        int a;
        int b;
        BoundaryTag tag;
        bool alive;
    };

    int insert_point(const Vec2& p, int hint);
    int locate(const Vec2& p, int hint) const;
    int add_subsegment(int a, int b, BoundaryTag tag);
    void kill_subsegment(int s);
    template <class F>
    void visit_subsegments_near(const Vec2& p, F&& fn) const;
    void split_subsegment(int s);
    bool subsegment_needs_split(int s) const;
    bool is_bad(int t) const;
    void process_segments();

    const Pslg& pslg_;
    const RefinementOptions& opt_;
    std::vector<Vec2> pts_;
    std::vector<Tri> tris_;
    std::vector<SubSegment> subs_;
    std::deque<int> seg_queue_;
    std::deque<int> tri_queue_;
    PointGrid grid_;
    PointGrid seg_grid_;  // subsegment midpoints
    std::multiset<double> half_lengths_;
    double extent_{1.0};
    int last_tri_{0};
    int num_super_{3};
};

PointGrid make_grid(const Pslg& pslg, const RefinementOptions& opt) {
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 hi{-lo.x, -lo.y};
    for (const auto& p : pslg.points) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double extent = std::max(hi.x - lo.x, hi.y - lo.y);
    double h_min = extent;
    for (const auto& p : pslg.points) h_min = std::min(h_min, opt.size(p));
    const double cell = std::clamp(4.0 * h_min, extent / 1000.0, extent);
    return PointGrid(lo, hi, cell);
}

Refiner::Refiner(const Pslg& pslg, const RefinementOptions& options)
    : pslg_(pslg), opt_(options), grid_(make_grid(pslg, options)), seg_grid_(make_grid(pslg, options)) {
    if (pslg.points.size() < 3 || pslg.segments.size() < 3) throw MeshError("mesh generation: PSLG too small");
    if (!opt_.size) throw MeshError("mesh generation: no size function");
    Vec2 lo = pslg.points[0];
    Vec2 hi = pslg.points[0];
    for (const auto& p : pslg.points) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const Vec2 mid = 0.5 * (lo + hi);
    extent_ = std::max(hi.x - lo.x, hi.y - lo.y);
    const double r = 20.0 * extent_;
    pts_.push_back(mid + Vec2{-r, -r});
    pts_.push_back(mid + Vec2{r, -r});
    pts_.push_back(mid + Vec2{0.0, r});
    tris_.push_back({{0, 1, 2}, {-1, -1, -1}, true});

    std::vector<int> ids(pslg.points.size());
    for (std::size_t i = 0; i < pslg.points.size(); ++i) ids[i] = insert_point(pslg.points[i], last_tri_);
    for (const auto& s : pslg.segments) {
        if (s.a == s.b) throw MeshError("mesh generation: degenerate segment");
        seg_queue_.push_back(add_subsegment(ids.at(s.a), ids.at(s.b), s.tag));
    }
}

int Refiner::add_subsegment(int a, int b, BoundaryTag tag) {
    const int s = static_cast<int>(subs_.size());
    subs_.push_back({a, b, tag, true});
    seg_grid_.insert(s, 0.5 * (pts_[a] + pts_[b]));
    half_lengths_.insert(0.5 * norm(pts_[b] - pts_[a]));
    return s;
}

void Refiner::kill_subsegment(int s) {
    auto& seg = subs_[s];
    seg.alive = false;
    seg_grid_.erase(s, 0.5 * (pts_[seg.a] + pts_[seg.b]));
    half_lengths_.erase(half_lengths_.find(0.5 * norm(pts_[seg.b] - pts_[seg.a])));
}

template <class F>
void Refiner::visit_subsegments_near(const Vec2& p, F&& fn) const {
    if (half_lengths_.empty()) return;
    const double r = *half_lengths_.rbegin();
    seg_grid_.visit(p - Vec2{r, r}, p + Vec2{r, r}, [&](int s) {
        if (subs_[s].alive) fn(s);
    });
}

int Refiner::locate(const Vec2& p, int hint) const {
    int t = (hint >= 0 && hint < static_cast<int>(tris_.size()) && tris_[hint].alive) ? hint : -1;
    if (t < 0) {
        for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i) {
            if (tris_[i].alive) {
                t = i;
                break;
            }
        }
    }
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step) {
        const Tri& tri = tris_[t];
        int next = -1;
        for (int i = 0; i < 3; ++i) {
            const Vec2& a = pts_[tri.v[(i + 1) % 3]];
            const Vec2& b = pts_[tri.v[(i + 2) % 3]];
            if (orient(a, b, p) < 0.0) {
                next = tri.nb[i];
                break;
            }
        }
        if (next < 0) return t;
        t = next;
    }
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
        const Tri& tri = tris_[i];
        if (!tri.alive) continue;
        if (orient(pts_[tri.v[0]], pts_[tri.v[1]], p) >= 0.0 && orient(pts_[tri.v[1]], pts_[tri.v[2]], p) >= 0.0 &&
            orient(pts_[tri.v[2]], pts_[tri.v[0]], p) >= 0.0) {
            return i;
        }
    }
    throw MeshError("mesh generation: point location failed");
}

int Refiner::insert_point(const Vec2& p, int hint) {
    const int start = locate(p, hint);
    const int id = static_cast<int>(pts_.size());
    pts_.push_back(p);

    // Cavity: triangles connected to `start` whose circumcircle contains p.
    std::vector<int> cavity{start};
    std::unordered_map<int, char> mark{{start, 1}};
    for (std::size_t head = 0; head < cavity.size(); ++head) {
        const Tri& tri = tris_[cavity[head]];
        for (int i = 0; i < 3; ++i) {
            const int n = tri.nb[i];
            if (n < 0 || mark.count(n)) continue;
            const Tri& nt = tris_[n];
            if (incircle(pts_[nt.v[0]], pts_[nt.v[1]], pts_[nt.v[2]], p) > 0.0) {
                mark[n] = 1;
                cavity.push_back(n);
            } else {
                mark[n] = 0;
            }
        }
    }

    // Keep the cavity star-shaped from p: drop triangles whose outer edge
    // is not strictly visible.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t ci = 0; ci < cavity.size(); ++ci) {
            const int t = cavity[ci];
            if (t == start || mark[t] != 1) continue;
            const Tri& tri = tris_[t];
            for (int i = 0; i < 3; ++i) {
                const int n = tri.nb[i];
                const bool outside = n < 0 || mark.count(n) == 0 || mark[n] != 1;
                if (!outside) continue;
                if (orient(pts_[tri.v[(i + 1) % 3]], pts_[tri.v[(i + 2) % 3]], p) <= 0.0) {
                    mark[t] = 0;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<int> kept;
    for (int t : cavity) {
        if (mark[t] == 1) kept.push_back(t);
    }

    // Boundary edges of the cavity, each producing one new triangle.
    struct Fan {
        int a, b, outer;
    };
    std::vector<Fan> fan;
    for (int t : kept) {
        const Tri& tri = tris_[t];
        for (int i = 0; i < 3; ++i) {
            const int n = tri.nb[i];
            if (n >= 0 && mark.count(n) && mark[n] == 1) continue;
            fan.push_back({tri.v[(i + 1) % 3], tri.v[(i + 2) % 3], n});
        }
    }
    for (int t : kept) tris_[t].alive = false;

    std::unordered_map<int, int> by_first;   // new triangle with edge (p, a) keyed by a
    std::unordered_map<int, int> by_second;  // new triangle with edge (b, p) keyed by b
    std::vector<int> created;
    for (const auto& f : fan) {
        const int nt = static_cast<int>(tris_.size());
        // Triangle (a, b, p): nb opposite a is across (b,p), opposite b across (p,a), opposite p is outer.
        tris_.push_back({{f.a, f.b, id}, {-1, -1, f.outer}, true});
        if (f.outer >= 0) {
            Tri& o = tris_[f.outer];
            for (int i = 0; i < 3; ++i) {
                const int oa = o.v[(i + 1) % 3];
                const int ob = o.v[(i + 2) % 3];
                if (oa == f.b && ob == f.a) o.nb[i] = nt;
            }
        }
        by_first[f.a] = nt;
        by_second[f.b] = nt;
        created.push_back(nt);
    }
    for (int nt : created) {
        Tri& tri = tris_[nt];
        // Edge (b, p) opposite a is shared with the triangle whose first vertex is b.
        if (auto it = by_first.find(tri.v[1]); it != by_first.end()) tri.nb[0] = it->second;
        // Edge (p, a) opposite b is shared with the triangle whose second vertex is a.
        if (auto it = by_second.find(tri.v[0]); it != by_second.end()) tri.nb[1] = it->second;
        tri_queue_.push_back(nt);
    }
    if (!created.empty()) last_tri_ = created.front();

    if (id >= num_super_) grid_.insert(id, p);
    visit_subsegments_near(p, [&](int s) {
        if (in_diametral_circle(pts_[subs_[s].a], pts_[subs_[s].b], p)) seg_queue_.push_back(s);
    });
    return id;
}

bool Refiner::subsegment_needs_split(int s) const {
    const auto& seg = subs_[s];
    const Vec2 a = pts_[seg.a];
    const Vec2 b = pts_[seg.b];
    const Vec2 m = 0.5 * (a + b);
    const double len = norm(b - a);
    if (len > opt_.size(m)) return true;
    const double r = 0.5 * len;
    bool encroached = false;
    grid_.visit(m - Vec2{r, r}, m + Vec2{r, r}, [&](int id) {
        if (id != seg.a && id != seg.b && in_diametral_circle(a, b, pts_[id])) encroached = true;
    });
    return encroached;
}

void Refiner::split_subsegment(int s) {
    const SubSegment seg = subs_[s];
    const Vec2 m = 0.5 * (pts_[seg.a] + pts_[seg.b]);
    if (norm(pts_[seg.b] - pts_[seg.a]) < 1e-9 * extent_) {
        throw MeshError("mesh generation: segment refinement stalled near (" + std::to_string(m.x) + ", " +
                        std::to_string(m.y) + ")");
    }
    kill_subsegment(s);
    const int id = insert_point(m, last_tri_);
    seg_queue_.push_back(add_subsegment(seg.a, id, seg.tag));
    seg_queue_.push_back(add_subsegment(id, seg.b, seg.tag));
}

void Refiner::process_segments() {
    while (!seg_queue_.empty()) {
        const int s = seg_queue_.front();
        seg_queue_.pop_front();
        if (!subs_[s].alive || subs_[s].a < 0 || subs_[s].b < 0) continue;
        if (!subsegment_needs_split(s)) continue;
        if (pts_.size() > opt_.max_points) throw MeshError("mesh generation: point budget exceeded near segments");
        split_subsegment(s);
    }
}

bool Refiner::is_bad(int t) const {
    const Tri& tri = tris_[t];
    if (!tri.alive) return false;
    for (int v : tri.v) {
        if (v < num_super_) return false;
    }
    const Vec2& a = pts_[tri.v[0]];
    const Vec2& b = pts_[tri.v[1]];
    const Vec2& c = pts_[tri.v[2]];
    const Vec2 centroid = (a + b + c) * (1.0 / 3.0);
    if (!pslg_.inside(centroid)) return false;
    const double r = norm(circumcenter(a, b, c) - a);
    const double shortest = std::min({norm(b - a), norm(c - b), norm(a - c)});
    return r > opt_.max_radius_edge_ratio * shortest || r > opt_.size(centroid) / std::sqrt(3.0);
}

Mesh Refiner::build() {
    process_segments();
    while (!tri_queue_.empty()) {
        const int t = tri_queue_.front();
        tri_queue_.pop_front();
        if (!is_bad(t)) continue;
        if (pts_.size() > opt_.max_points) throw MeshError("mesh generation: point budget exceeded");
        const Tri& tri = tris_[t];
        const Vec2 cc = circumcenter(pts_[tri.v[0]], pts_[tri.v[1]], pts_[tri.v[2]]);
        std::vector<int> encroached;
        visit_subsegments_near(cc, [&](int s) {
            if (in_diametral_circle(pts_[subs_[s].a], pts_[subs_[s].b], cc)) encroached.push_back(s);
        });
        if (encroached.empty() && !pslg_.inside(cc)) {
            // Outside the region but encroaching nothing: split the closest subsegment.
            int nearest = -1;
            double nearest_d = std::numeric_limits<double>::max();
            for (std::size_t s = 0; s < subs_.size(); ++s) {
                if (!subs_[s].alive) continue;
                const double d = norm(0.5 * (pts_[subs_[s].a] + pts_[subs_[s].b]) - cc);
                if (d < nearest_d) {
                    nearest_d = d;
                    nearest = static_cast<int>(s);
                }
            }
            encroached.push_back(nearest);
        }
        if (encroached.empty()) {
            insert_point(cc, t);
        } else {
            for (int s : encroached) {
                if (subs_[s].alive) split_subsegment(s);
            }
            tri_queue_.push_back(t);
        }
        process_segments();
    }

    // Keep the triangles inside the region; renumber vertices.
    std::vector<int> new_id(pts_.size(), -1);
    std::vector<Vec2> nodes;
    std::vector<Cell> cells;
    for (const auto& tri : tris_) {
        if (!tri.alive) continue;
        bool super = false;
        for (int v : tri.v) super = super || v < num_super_;
        if (super) continue;
        const Vec2 centroid = (pts_[tri.v[0]] + pts_[tri.v[1]] + pts_[tri.v[2]]) * (1.0 / 3.0);
        if (!pslg_.inside(centroid)) continue;
        Cell c{};
        for (int i = 0; i < 3; ++i) {
            int& nid = new_id[tri.v[i]];
            if (nid < 0) {
                nid = static_cast<int>(nodes.size());
                nodes.push_back(pts_[tri.v[i]]);
            }
            c[i] = nid;
        }
        cells.push_back(c);
    }
    std::vector<BoundaryEdge> edges;
    for (const auto& s : subs_) {
        if (!s.alive) continue;
        if (new_id[s.a] < 0 || new_id[s.b] < 0) {
            throw MeshError("mesh generation: boundary segment near (" + std::to_string(pts_[s.a].x) + ", " +
                            std::to_string(pts_[s.a].y) + ") not recovered");
        }
        edges.push_back({{new_id[s.a], new_id[s.b]}, s.tag});
    }
    Mesh mesh(std::move(nodes), std::move(cells), std::move(edges));
    const auto audit = audit_mesh(mesh);
    if (!audit.ok) throw MeshError("mesh generation produced an invalid mesh: " + audit.problems.front());
    return mesh;
}

}  // namespace

Mesh refine_pslg(const Pslg& pslg, const RefinementOptions& options) {
    if (!pslg.inside) throw MeshError("mesh generation: no inside predicate");
    Refiner refiner(pslg, options);
    return refiner.build();
}

Mesh unit_square_mesh(int n, BoundaryTag tag) {
    if (n < 1) throw MeshError("unit square mesh needs n >= 1");
    std::vector<Vec2> nodes;
    const auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) nodes.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
    std::vector<Cell> cells;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    std::vector<BoundaryEdge> edges;
    for (int i = 0; i < n; ++i) {
        edges.push_back({{id(i, 0), id(i + 1, 0)}, tag});
        edges.push_back({{id(n, i), id(n, i + 1)}, tag});
        edges.push_back({{id(i + 1, n), id(i, n)}, tag});
        edges.push_back({{id(0, i + 1), id(0, i)}, tag});
    }
    return Mesh(std::move(nodes), std::move(cells), std::move(edges));
}

}  // namespace alesupg
