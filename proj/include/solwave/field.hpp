#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "solwave/grid.hpp"

namespace solwave {

using cplx = std::complex<double>;

// Complex samples on a Grid. Treated as a value; operations return new fields.
struct Field {
    GridPtr grid;
    std::vector<cplx> v;

    Field() = default;
    explicit Field(GridPtr g) : grid(std::move(g)), v(grid->n, cplx(0.0, 0.0)) {}
    Field(GridPtr g, std::vector<cplx> vals) : grid(std::move(g)), v(std::move(vals)) {
        if (v.size() != grid->n) throw std::invalid_argument("Field: size mismatch");
    }

    std::size_t size() const { return v.size(); }
    const Grid& g() const { return *grid; }

    bool finite() const {
        for (const auto& z : v)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }
};

template <typename F>
Field map_field(const Field& f, F&& fn) {
    Field out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) out.v[i] = fn(f.v[i], i);
    return out;
}

inline void require_same_grid(const Field& a, const Field& b) {
    if (!same_grid(a.g(), b.g())) throw std::invalid_argument("grid mismatch");
}

inline Field operator+(const Field& a, const Field& b) {
    require_same_grid(a, b);
    return map_field(a, [&](cplx z, std::size_t i) { return z + b.v[i]; });
}
inline Field operator-(const Field& a, const Field& b) {
    require_same_grid(a, b);
    return map_field(a, [&](cplx z, std::size_t i) { return z - b.v[i]; });
}
inline Field operator*(double s, const Field& f) {
    return map_field(f, [s](cplx z, std::size_t) { return s * z; });
}
inline Field operator*(cplx s, const Field& f) {
    return map_field(f, [s](cplx z, std::size_t) { return s * z; });
}

inline double max_abs(const Field& f) {
    double m = 0.0;
    for (const auto& z : f.v) m = std::max(m, std::abs(z));
    return m;
}

// L2 norm with the dx quadrature weight.
inline double norm_l2(const Field& f) {
    double s = 0.0;
    for (const auto& z : f.v) s += std::norm(z);
    return std::sqrt(f.g().dx * s);
}

// --- CSV dump format: header "x,re,im", 17 significant digits ---

inline void write_field_csv(const Field& f, std::ostream& os) {
    os << "x,re,im\n";
    char buf[128];
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", f.g().x[i],
                      f.v[i].real(), f.v[i].imag());
        os << buf;
    }
}

inline void write_field_csv(const Field& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    write_field_csv(f, os);
}

// Reads a field written by write_field_csv. The grid is rebuilt from the
// abscissae (n from row count, L from spacing).
inline Field read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,re,im", 0) != 0)
        throw std::runtime_error("field csv: bad header");
    std::vector<double> xs;
    std::vector<cplx> vs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double x, re, im;
        if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &x, &re, &im) != 3)
            throw std::runtime_error("field csv: bad row: " + line);
        xs.push_back(x);
        vs.push_back(cplx(re, im));
    }
    if (xs.size() < 8) throw std::runtime_error("field csv: too few rows");
    const std::size_t n = xs.size();
    const double L = -xs.front();
    auto g = make_grid(n, L);
    return Field(g, std::move(vs));
}

inline Field read_field_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_field_csv(is);
}

}  // namespace solwave
