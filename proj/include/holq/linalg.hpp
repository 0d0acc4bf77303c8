#pragma once

// Dense complex linear algebra for the fixed dimensions that appear in this
// problem: qubit (2), Lambda system (3), two-qubit (4). Values are immutable
// after construction and safe to share across threads.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace holq {

using Cx = std::complex<double>;

inline bool is_finite(Cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline constexpr double kNormTol = 1e-12;      // state normalization
inline constexpr double kUnitaryTol = 1e-10;   // accumulated rounding in 3x3/4x4 products

template <int Dim>
struct Matrix {
    static_assert(Dim == 2 || Dim == 3 || Dim == 4, "only dimensions 2, 3, 4 are supported");

    std::array<Cx, Dim * Dim> entries{};

    Cx& operator()(int r, int c) { return entries[static_cast<std::size_t>(r * Dim + c)]; }
    const Cx& operator()(int r, int c) const {
        return entries[static_cast<std::size_t>(r * Dim + c)];
    }

    static Matrix identity() {
        Matrix m;
        for (int i = 0; i < Dim; ++i) m(i, i) = 1.0;
        return m;
    }
};

template <int Dim>
Matrix<Dim> matmul(const Matrix<Dim>& a, const Matrix<Dim>& b) {
    Matrix<Dim> out;
    for (int r = 0; r < Dim; ++r)
        for (int c = 0; c < Dim; ++c) {
            Cx s = 0.0;
            for (int k = 0; k < Dim; ++k) s += a(r, k) * b(k, c);
            out(r, c) = s;
        }
    return out;
}

template <int Dim>
Matrix<Dim> adjoint(const Matrix<Dim>& a) {
    Matrix<Dim> out;
    for (int r = 0; r < Dim; ++r)
        for (int c = 0; c < Dim; ++c) out(r, c) = std::conj(a(c, r));
    return out;
}

template <int Dim>
double max_abs_diff(const Matrix<Dim>& a, const Matrix<Dim>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        m = std::max(m, std::abs(a.entries[i] - b.entries[i]));
    return m;
}

// max-entry |U†U - I|; zero for an exact unitary.
template <int Dim>
double unitarity_defect(const Matrix<Dim>& u) {
    return max_abs_diff(matmul(adjoint(u), u), Matrix<Dim>::identity());
}

template <int Dim>
class PureState {
public:
    // Amplitudes must already be normalized to within kNormTol.
    explicit PureState(const std::array<Cx, Dim>& amplitudes) : amp_(amplitudes) {
        double n2 = 0.0;
        for (const Cx& a : amp_) {
            if (!is_finite(a)) throw std::invalid_argument("PureState: non-finite amplitude");
            n2 += std::norm(a);
        }
        if (std::abs(n2 - 1.0) > 64 * kNormTol)
            throw std::invalid_argument("PureState: amplitudes are not normalized");
    }

    // Rescales arbitrary (nonzero) amplitudes to unit norm.
    static PureState normalized(std::array<Cx, Dim> amplitudes) {
        double n2 = 0.0;
        for (const Cx& a : amplitudes) {
            if (!is_finite(a)) throw std::invalid_argument("PureState: non-finite amplitude");
            n2 += std::norm(a);
        }
        if (n2 < kNormTol) throw std::invalid_argument("PureState: zero vector");
        const double inv = 1.0 / std::sqrt(n2);
        for (Cx& a : amplitudes) a *= inv;
        return PureState(amplitudes);
    }

    static PureState basis(int k) {
        std::array<Cx, Dim> a{};
        a[static_cast<std::size_t>(k)] = 1.0;
        return PureState(a);
    }

    const std::array<Cx, Dim>& amplitudes() const { return amp_; }
    Cx operator[](int i) const { return amp_[static_cast<std::size_t>(i)]; }

    double norm() const {
        double n2 = 0.0;
        for (const Cx& a : amp_) n2 += std::norm(a);
        return std::sqrt(n2);
    }

private:
    std::array<Cx, Dim> amp_;
};

template <int Dim>
PureState<Dim> apply(const Matrix<Dim>& u, const PureState<Dim>& s) {
    std::array<Cx, Dim> out{};
    for (int r = 0; r < Dim; ++r) {
        Cx acc = 0.0;
        for (int c = 0; c < Dim; ++c) acc += u(r, c) * s[c];
        out[static_cast<std::size_t>(r)] = acc;
    }
    return PureState<Dim>(out);
}

// |<a|b>|^2, clamped into [0, 1]. Symmetric and global-phase invariant.
template <int Dim>
double overlap_probability(const PureState<Dim>& a, const PureState<Dim>& b) {
    Cx ov = 0.0;
    for (int i = 0; i < Dim; ++i) ov += std::conj(a[i]) * b[i];
    const double p = std::norm(ov);
    if (p > 1.0 + 1e-9)
        throw std::logic_error("overlap_probability: value above 1 for normalized states");
    return std::min(1.0, std::max(0.0, p));
}

// Qubit state lifted into the Lambda system with empty auxiliary level.
inline PureState<3> embed_qubit(const PureState<2>& s) {
    return PureState<3>({s[0], s[1], Cx(0.0)});
}

}  // namespace holq
