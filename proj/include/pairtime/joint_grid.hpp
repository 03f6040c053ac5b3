#ifndef PAIRTIME_JOINT_GRID_HPP
#define PAIRTIME_JOINT_GRID_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "pairtime/axis.hpp"

namespace pairtime {

enum class GridDomain { spectral, temporal };

// Complex two-photon amplitude on a uniform (signal, idler) grid.
// values(i_s, i_i): rows follow axis_s, columns follow axis_i.
// After normalize(), sum |values|^2 * step_s * step_i = 1, so |values|^2 is a
// probability density over the two axes.
struct JointGrid {
    Axis axis_s;
    Axis axis_i;
    GridDomain domain = GridDomain::spectral;
    Eigen::MatrixXcd values;

    double total_probability() const;
    void normalize();  // throws std::domain_error on an all-zero grid

    // element-wise |values|^2 (a density over the same axes)
    Eigen::MatrixXd intensity() const;

    void validate() const;
};

// |JTA|^2 with the same axes; requires a temporal grid.
Eigen::MatrixXd jti(const JointGrid& jta);

// binary container (magic "PTJG"), see README for the layout
void save_joint_grid(const JointGrid& g, const std::string& path);
JointGrid load_joint_grid(const std::string& path);

// CSV export: axis_s,axis_i,re,im,abs2  (one row per grid point)
void export_joint_grid_csv(const JointGrid& g, const std::string& path);

}  // namespace pairtime

#endif
