#include "pairtime/joint_grid.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace pairtime {

double JointGrid::total_probability() const {
    return values.squaredNorm() * axis_s.step * axis_i.step;
}

void JointGrid::normalize() {
    double p = total_probability();
    if (!(p > 0.0))
        throw std::domain_error("JointGrid::normalize: grid has no weight");
    values /= std::sqrt(p);
}

Eigen::MatrixXd JointGrid::intensity() const {
    return values.cwiseAbs2();
}

void JointGrid::validate() const {
    axis_s.validate();
    axis_i.validate();
    if (values.rows() != axis_s.n || values.cols() != axis_i.n)
        throw std::domain_error("JointGrid: value shape does not match axes");
}

Eigen::MatrixXd jti(const JointGrid& jta) {
    if (jta.domain != GridDomain::temporal)
        throw std::domain_error("jti: input grid is not temporal");
    return jta.intensity();
}

namespace {

constexpr char kMagic[4] = {'P', 'T', 'J', 'G'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("joint grid file: truncated");
    return v;
}

void put_axis(std::ostream& os, const Axis& a) {
    put(os, a.start);
    put(os, a.step);
    put(os, static_cast<std::uint32_t>(a.n));
}

Axis get_axis(std::istream& is) {
    Axis a;
    a.start = get<double>(is);
    a.step = get<double>(is);
    a.n = static_cast<int>(get<std::uint32_t>(is));
    return a;
}

}  // namespace

void save_joint_grid(const JointGrid& g, const std::string& path) {
    g.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os.write(kMagic, 4);
    put(os, kVersion);
    put(os, static_cast<std::uint8_t>(g.domain == GridDomain::temporal ? 1 : 0));
    put_axis(os, g.axis_s);
    put_axis(os, g.axis_i);
    for (int i = 0; i < g.axis_s.n; ++i)
        for (int j = 0; j < g.axis_i.n; ++j) {
            put(os, g.values(i, j).real());
            put(os, g.values(i, j).imag());
        }
    if (!os) throw std::runtime_error("write failed: " + path);
}

JointGrid load_joint_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("joint grid file: bad magic");
    auto version = get<std::uint16_t>(is);
    if (version != kVersion)
        throw std::runtime_error("joint grid file: unsupported version");
    JointGrid g;
    g.domain = get<std::uint8_t>(is) ? GridDomain::temporal : GridDomain::spectral;
    g.axis_s = get_axis(is);
    g.axis_i = get_axis(is);
    g.axis_s.validate();
    g.axis_i.validate();
    g.values.resize(g.axis_s.n, g.axis_i.n);
    for (int i = 0; i < g.axis_s.n; ++i)
        for (int j = 0; j < g.axis_i.n; ++j) {
            double re = get<double>(is);
            double im = get<double>(is);
            g.values(i, j) = {re, im};
        }
    return g;
}

void export_joint_grid_csv(const JointGrid& g, const std::string& path) {
    g.validate();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for write: " + path);
    os << "axis_s,axis_i,re,im,abs2\n";
    os.precision(17);
    for (int i = 0; i < g.axis_s.n; ++i)
        for (int j = 0; j < g.axis_i.n; ++j) {
            const auto v = g.values(i, j);
            os << g.axis_s.value(i) << ',' << g.axis_i.value(j) << ','
               << v.real() << ',' << v.imag() << ',' << std::norm(v) << '\n';
        }
}

}  // namespace pairtime
