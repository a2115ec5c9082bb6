#include "widomlab/domains.hpp"

#include <algorithm>
#include <cmath>

namespace widomlab {

namespace {

double cross2(const Point& o, const Point& a, const Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double polygon_signed_area(const std::vector<Point>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % v.size()];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * s;
}

bool segments_properly_intersect(const Point& a, const Point& b, const Point& c,
                                 const Point& d) {
    double d1 = cross2(c, d, a);
    double d2 = cross2(c, d, b);
    double d3 = cross2(a, b, c);
    double d4 = cross2(a, b, d);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool polygon_is_simple(const std::vector<Point>& v) {
    std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            // skip adjacent edges (shared vertex)
            if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
            if (segments_properly_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]))
                return false;
        }
    }
    return true;
}

bool point_on_segment(const Point& p, const Point& a, const Point& b, double tol) {
    double cr = cross2(a, b, p);
    double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    if (std::abs(cr) > tol * std::max(1.0, len)) return false;
    double t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) /
               (len * len);
    return t >= -tol && t <= 1.0 + tol;
}

// Ear-clipping triangulation for simple CCW polygons.
std::vector<std::array<Point, 3>> triangulate(std::vector<Point> v) {
    std::vector<std::array<Point, 3>> tris;
    while (v.size() > 3) {
        std::size_t m = v.size();
        bool clipped = false;
        for (std::size_t i = 0; i < m; ++i) {
            const Point& prev = v[(i + m - 1) % m];
            const Point& cur = v[i];
            const Point& next = v[(i + 1) % m];
            if (cross2(prev, cur, next) <= 0) continue;  // reflex
            bool ear = true;
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i || j == (i + m - 1) % m || j == (i + 1) % m) continue;
                // point-in-triangle test
                const Point& p = v[j];
                if (cross2(prev, cur, p) >= 0 && cross2(cur, next, p) >= 0 &&
                    cross2(next, prev, p) >= 0) {
                    ear = false;
                    break;
                }
            }
            if (ear) {
                tris.push_back({prev, cur, next});
                v.erase(v.begin() + static_cast<long>(i));
                clipped = true;
                break;
            }
        }
        if (!clipped) throw Error("polygon triangulation failed (degenerate input)");
    }
    tris.push_back({v[0], v[1], v[2]});
    return tris;
}

}  // namespace

Domain Domain::interval(double a, double b) {
    if (!(a < b)) throw Error("interval requires a < b");
    Domain d;
    d.kind_ = DomainKind::Interval;
    d.dim_ = 1;
    d.a_ = a;
    d.b_ = b;
    return d;
}

Domain Domain::box(const Box& b) {
    if (b.dim < 1 || b.dim > 2) throw Error("box dimension must be 1 or 2");
    for (int k = 0; k < b.dim; ++k)
        if (!(b.lo[k] < b.hi[k])) throw Error("box requires lo < hi on each axis");
    if (b.dim == 1) return interval(b.lo[0], b.hi[0]);
    Domain d;
    d.kind_ = DomainKind::BoxKind;
    d.dim_ = 2;
    d.box_ = b;
    return d;
}

Domain Domain::disk(const Point& center, double radius) {
    if (!(radius > 0)) throw Error("disk requires radius > 0");
    Domain d;
    d.kind_ = DomainKind::Disk;
    d.dim_ = 2;
    d.center_ = center;
    d.radius_ = radius;
    return d;
}

Domain Domain::polygon(std::vector<Point> vertices) {
    if (vertices.size() < 3) throw Error("polygon requires >= 3 vertices");
    double area = polygon_signed_area(vertices);
    if (area <= 0)
        throw Error("polygon must be counter-clockwise with positive area");
    if (!polygon_is_simple(vertices)) throw Error("polygon must be simple");
    Domain d;
    d.kind_ = DomainKind::Polygon;
    d.dim_ = 2;
    d.vertices_ = std::move(vertices);
    return d;
}

bool Domain::contains(const Point& x) const {
    switch (kind_) {
        case DomainKind::Interval:
            return x[0] > a_ && x[0] < b_;
        case DomainKind::BoxKind:
            return box_.contains(x);
        case DomainKind::Disk: {
            double dx = x[0] - center_[0], dy = x[1] - center_[1];
            return dx * dx + dy * dy < radius_ * radius_;
        }
        case DomainKind::Polygon: {
            // boundary points count as outside
            std::size_t m = vertices_.size();
            for (std::size_t i = 0; i < m; ++i)
                if (point_on_segment(x, vertices_[i], vertices_[(i + 1) % m], 1e-12))
                    return false;
            bool inside = false;
            for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
                const Point& vi = vertices_[i];
                const Point& vj = vertices_[j];
                if ((vi[1] > x[1]) != (vj[1] > x[1]) &&
                    x[0] < (vj[0] - vi[0]) * (x[1] - vi[1]) / (vj[1] - vi[1]) + vi[0])
                    inside = !inside;
            }
            return inside;
        }
    }
    return false;
}

Box Domain::bounding_box() const {
    switch (kind_) {
        case DomainKind::Interval:
            return Box::interval(a_, b_);
        case DomainKind::BoxKind:
            return box_;
        case DomainKind::Disk:
            return Box{{center_[0] - radius_, center_[1] - radius_},
                       {center_[0] + radius_, center_[1] + radius_},
                       2};
        case DomainKind::Polygon: {
            Box b{{vertices_[0][0], vertices_[0][1]},
                  {vertices_[0][0], vertices_[0][1]},
                  2};
            for (const auto& v : vertices_) {
                b.lo[0] = std::min(b.lo[0], v[0]);
                b.lo[1] = std::min(b.lo[1], v[1]);
                b.hi[0] = std::max(b.hi[0], v[0]);
                b.hi[1] = std::max(b.hi[1], v[1]);
            }
            return b;
        }
    }
    return Box{};
}

double Domain::volume() const {
    switch (kind_) {
        case DomainKind::Interval:
            return b_ - a_;
        case DomainKind::BoxKind:
            return box_.volume();
        case DomainKind::Disk:
            return M_PI * radius_ * radius_;
        case DomainKind::Polygon:
            return polygon_signed_area(vertices_);
    }
    return 0.0;
}

double Domain::boundary_measure() const {
    switch (kind_) {
        case DomainKind::Interval:
            return 2.0;  // endpoint count with unit weights
        case DomainKind::BoxKind:
            return 2.0 * (box_.extent(0) + box_.extent(1));
        case DomainKind::Disk:
            return 2.0 * M_PI * radius_;
        case DomainKind::Polygon: {
            double s = 0.0;
            std::size_t m = vertices_.size();
            for (std::size_t i = 0; i < m; ++i) {
                const Point& p = vertices_[i];
                const Point& q = vertices_[(i + 1) % m];
                s += std::hypot(q[0] - p[0], q[1] - p[1]);
            }
            return s;
        }
    }
    return 0.0;
}

std::vector<VolumeNode> Domain::volume_quadrature(int resolution) const {
    if (resolution < 2) throw Error("volume_quadrature requires resolution >= 2");
    std::vector<VolumeNode> nodes;
    switch (kind_) {
        case DomainKind::Interval: {
            double h = (b_ - a_) / resolution;
            nodes.reserve(resolution);
            for (int i = 0; i < resolution; ++i)
                nodes.push_back({{a_ + (i + 0.5) * h, 0.0}, h});
            break;
        }
        case DomainKind::BoxKind: {
            double hx = box_.extent(0) / resolution;
            double hy = box_.extent(1) / resolution;
            nodes.reserve(static_cast<std::size_t>(resolution) * resolution);
            for (int i = 0; i < resolution; ++i)
                for (int j = 0; j < resolution; ++j)
                    nodes.push_back({{box_.lo[0] + (i + 0.5) * hx,
                                      box_.lo[1] + (j + 0.5) * hy},
                                     hx * hy});
            break;
        }
        case DomainKind::Disk: {
            // midpoint in s = r^2 times uniform angles: total weight is exactly
            // pi r^2 and smooth integrands converge fast
            int nr = resolution;
            int nth = resolution;
            double ds = radius_ * radius_ / nr;
            double dth = 2.0 * M_PI / nth;
            double w = 0.5 * ds * dth;
            nodes.reserve(static_cast<std::size_t>(nr) * nth);
            for (int i = 0; i < nr; ++i) {
                double r = std::sqrt((i + 0.5) * ds);
                for (int j = 0; j < nth; ++j) {
                    double th = (j + 0.5) * dth;
                    nodes.push_back({{center_[0] + r * std::cos(th),
                                      center_[1] + r * std::sin(th)},
                                     w});
                }
            }
            break;
        }
        case DomainKind::Polygon: {
            auto tris = triangulate(vertices_);
            // subdivide each triangle into k^2 congruent children, centroid rule
            int k = std::max(2, static_cast<int>(std::ceil(
                                    resolution / std::sqrt(static_cast<double>(tris.size())))));
            for (const auto& t : tris) {
                double area = 0.5 * std::abs(cross2(t[0], t[1], t[2]));
                double w = area / (k * k);
                for (int i = 0; i < k; ++i) {
                    for (int j = 0; j < k - i; ++j) {
                        // upward child (i,j)
                        double u = (i + 1.0 / 3.0) / k, v = (j + 1.0 / 3.0) / k;
                        nodes.push_back(
                            {{t[0][0] + u * (t[1][0] - t[0][0]) + v * (t[2][0] - t[0][0]),
                              t[0][1] + u * (t[1][1] - t[0][1]) + v * (t[2][1] - t[0][1])},
                             w});
                        if (j < k - i - 1) {
                            double u2 = (i + 2.0 / 3.0) / k, v2 = (j + 2.0 / 3.0) / k;
                            nodes.push_back({{t[0][0] + u2 * (t[1][0] - t[0][0]) +
                                                  v2 * (t[2][0] - t[0][0]),
                                              t[0][1] + u2 * (t[1][1] - t[0][1]) +
                                                  v2 * (t[2][1] - t[0][1])},
                                             w});
                        }
                    }
                }
            }
            break;
        }
    }
    return nodes;
}

BoundaryQuadrature Domain::boundary_quadrature(int n_nodes) const {
    BoundaryQuadrature bq;
    bq.dim = dim_;
    if (kind_ == DomainKind::Interval) {
        bq.nodes.push_back({{a_, 0.0}, {-1.0, 0.0}, 1.0});
        bq.nodes.push_back({{b_, 0.0}, {1.0, 0.0}, 1.0});
        return bq;
    }
    if (n_nodes < 4) throw Error("boundary_quadrature requires n_nodes >= 4 for d=2");
    if (kind_ == DomainKind::Disk) {
        double w = 2.0 * M_PI * radius_ / n_nodes;
        bq.nodes.reserve(n_nodes);
        for (int k = 0; k < n_nodes; ++k) {
            double th = 2.0 * M_PI * (k + 0.5) / n_nodes;
            Point nrm{std::cos(th), std::sin(th)};
            bq.nodes.push_back(
                {{center_[0] + radius_ * nrm[0], center_[1] + radius_ * nrm[1]},
                 nrm,
                 w});
        }
        return bq;
    }
    // piecewise-linear boundaries: per-edge uniform interior nodes, constant
    // outward normals; corners carry no node
    std::vector<Point> verts;
    if (kind_ == DomainKind::BoxKind) {
        verts = {{box_.lo[0], box_.lo[1]},
                 {box_.hi[0], box_.lo[1]},
                 {box_.hi[0], box_.hi[1]},
                 {box_.lo[0], box_.hi[1]}};
    } else {
        verts = vertices_;
    }
    double perimeter = 0.0;
    std::size_t m = verts.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point& p = verts[i];
        const Point& q = verts[(i + 1) % m];
        perimeter += std::hypot(q[0] - p[0], q[1] - p[1]);
    }
    for (std::size_t i = 0; i < m; ++i) {
        const Point& p = verts[i];
        const Point& q = verts[(i + 1) % m];
        double len = std::hypot(q[0] - p[0], q[1] - p[1]);
        int ne = std::max(1, static_cast<int>(std::llround(n_nodes * len / perimeter)));
        // CCW orientation: outward normal is (dy, -dx)/len
        Point nrm{(q[1] - p[1]) / len, -(q[0] - p[0]) / len};
        double w = len / ne;
        for (int k = 0; k < ne; ++k) {
            double t = (k + 0.5) / ne;
            bq.nodes.push_back(
                {{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])}, nrm, w});
        }
    }
    return bq;
}

}  // namespace widomlab
