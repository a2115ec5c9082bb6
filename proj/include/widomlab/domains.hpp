#pragma once

#include <optional>
#include <vector>

#include "widomlab/core.hpp"

namespace widomlab {

enum class DomainKind { Interval, BoxKind, Disk, Polygon };

struct VolumeNode {
    Point point;
    double weight;
};

struct BoundaryNode {
    Point point;
    Point normal;  // exterior unit normal; for d=1 stored in component 0
    double weight;
};

struct BoundaryQuadrature {
    int dim = 1;
    std::vector<BoundaryNode> nodes;

    double total_measure() const {
        double s = 0.0;
        for (const auto& n : nodes) s += n.weight;
        return s;
    }
};

// Concrete bounded spatial/momentum regions: interval, axis-aligned box, disk,
// simple counter-clockwise polygon. Complements are never materialized; the
// operators and coefficients take a separate complement flag.
class Domain {
  public:
    static Domain interval(double a, double b);
    static Domain box(const Box& b);
    static Domain disk(const Point& center, double radius);
    static Domain polygon(std::vector<Point> vertices);

    int dim() const { return dim_; }
    DomainKind kind() const { return kind_; }
    bool bounded() const { return true; }

    // 1 on the open region, 0 outside; boundary points return 0.
    bool contains(const Point& x) const;
    int indicator(const Point& x) const { return contains(x) ? 1 : 0; }

    Box bounding_box() const;
    double volume() const;            // analytic measure
    double boundary_measure() const;  // analytic perimeter / endpoint count

    // Interior quadrature with positive weights; total weight is exact for
    // interval/box/disk/polygon by construction and converges for integrands.
    std::vector<VolumeNode> volume_quadrature(int resolution) const;

    // Boundary nodes with exterior unit normals. n_nodes is the total target
    // for d=2 and ignored for d=1, where the quadrature degenerates to the
    // endpoint set with unit weights and normals -/+1.
    BoundaryQuadrature boundary_quadrature(int n_nodes) const;

    // Accessors for kernel closed forms.
    double interval_a() const { return a_; }
    double interval_b() const { return b_; }
    const Box& box_data() const { return box_; }
    const Point& disk_center() const { return center_; }
    double disk_radius() const { return radius_; }
    const std::vector<Point>& polygon_vertices() const { return vertices_; }

  private:
    Domain() = default;

    DomainKind kind_ = DomainKind::Interval;
    int dim_ = 1;
    double a_ = 0.0, b_ = 0.0;       // interval
    Box box_{};                      // box
    Point center_{0.0, 0.0};         // disk
    double radius_ = 0.0;            // disk
    std::vector<Point> vertices_;    // polygon, CCW
};

// A momentum region Gamma or its complement. The complement is handled
// implicitly: operators realize it as a window kernel minus the Gamma kernel,
// coefficients integrate over the symbol's momentum support minus Gamma.
struct GammaRegion {
    Domain domain;
    bool complement = false;

    static GammaRegion direct(Domain d) { return GammaRegion{std::move(d), false}; }
    static GammaRegion complement_of(Domain d) { return GammaRegion{std::move(d), true}; }
};

}  // namespace widomlab
