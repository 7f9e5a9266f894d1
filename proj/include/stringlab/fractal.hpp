#ifndef STRINGLAB_FRACTAL_HPP
#define STRINGLAB_FRACTAL_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "stringlab/simulate.hpp"

namespace stringlab {

// A dimension formula value; nullopt means the set is a.s. empty.
using DimValue = std::optional<double>;

// dim of the range u([0,1]^2) in R^d: min(d, 6).
DimValue range_dimension(int d);

// dim of the graph over [0,1]^2: 2 + 3d/4 (d<4), 3 + d/2 (4<=d<6), 6.
DimValue graph_dimension(int d);

// dim of a level set: 2 - d/4 (d<4), 3 - d/2 (4<=d<6); empty for d >= 6.
DimValue level_set_dimension(int d);

// two-parameter double times: 4 - d/4 (d<8), 6 - d/2 (8<=d<12); empty d>=12.
DimValue double_time_i_dimension(int d);

// equal-time doubles: 3 - d/4 (d<4), 4 - d/2 (4<=d<8); empty d>=8.
DimValue double_time_ii_dimension(int d);

// dim of the image of E1 x E2: min(d, 4 dim E1 + 2 dim E2).
double image_product_dimension(double dim_e1, double dim_e2, int d);

// Graph dimensions of one-parameter slices, from the 1/4 and 1/2 Holder
// exponents of the increment variance.
inline constexpr double kTimeSliceGraphDim = 1.75;
inline constexpr double kSpaceSliceGraphDim = 1.5;

// Finite point set in R^ambient feeding the box counters.
struct CellCloud {
    int ambient = 2;
    std::vector<double> points; // flat, size() * ambient
    std::optional<double> cell_size_hint;

    std::size_t size() const { return ambient ? points.size() / ambient : 0; }
    const double* point(std::size_t i) const { return points.data() + i * ambient; }
    void push(std::initializer_list<double> coords);
};

enum class BoxMetric { Euclidean, Parabolic };

// Occupied axis-aligned lattice boxes: side r per axis (euclidean) or
// r^4 x r^2 (parabolic; ambient-2 parameter clouds only).
std::size_t box_count(const CellCloud& cloud, double r, BoxMetric metric = BoxMetric::Euclidean);

struct DimEstimate {
    double slope = 0.0;
    double stderr = 0.0;
    std::vector<std::pair<double, std::size_t>> scales; // (r, N(r))
    std::size_t fit_begin = 0; // half-open index range into scales
    std::size_t fit_end = 0;
};

// log N(r) against log(1/r) over the given scales; drops N <= 4 and
// N >= 0.9 * cloud size, needs >= 4 surviving scales.
DimEstimate fit_box_dimension(const CellCloud& cloud, const std::vector<double>& scales,
                              BoxMetric metric = BoxMetric::Euclidean);

std::vector<double> octave_scales(int k_min, int k_max); // r = 2^-k

// ---- extraction -------------------------------------------------------

// Grid nodes with max-norm |U - u| <= eps (all d components).
CellCloud level_set_nodes(const FieldSample& field, const std::vector<double>& u, double eps);

// Grid cells whose corner values bracket u in every component, returned
// as cell centers (coordinates shifted so the grid origin is at 0).
// This mirrors the covering events "u in U(R)" used for the level-set
// upper bound and is the extraction the dimension pipeline uses.
CellCloud level_crossing_cells(const FieldSample& field, const std::vector<double>& u);

// eps tied to the grid's modulus of continuity.
double level_eps_policy(const GridSpec& grid, double kappa = 1.0);

// Node pairs ((t1,x1),(t2,x2)) with t2 - t1 >= min_time_gap and
// |U(t2,x2) - U(t1,x1)|_inf <= eps, as ambient-4 points.
CellCloud double_time_pairs(const FieldSample& field, double eps, double min_time_gap);

// Equal-time triples (t, x1, x2) with x2 - x1 >= min_space_gap and
// |U(t,x2) - U(t,x1)|_inf <= eps, as ambient-3 points.
CellCloud equal_time_doubles(const FieldSample& field, double eps, double min_space_gap);

// ---- graph / range clouds --------------------------------------------

// Graph cloud of a 1-D path: the polyline through (coord, stretch * value),
// recorded as the centers of the fine-lattice cells it visits. Column
// counts at scales r >= 4 * fine_r are exact for the polyline because the
// dyadic lattices nest. The value stretch leaves the box dimension
// unchanged and keeps columns many boxes tall.
CellCloud graph_cloud(const PathSample& path, double stretch, double fine_r);

// Values of the field as an ambient-d cloud (the range of the sample).
CellCloud range_cloud(const FieldSample& field);

} // namespace stringlab

#endif
