#pragma once

// Reference implementations written from the definitions, sharing no code
// with the library. Used by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<long double>>;

/// Gauss-Jordan inversion with partial pivoting.
inline Matrix invert(Matrix a) {
    const std::size_t n = a.size();
    Matrix inv(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        }
        if (std::fabs(a[piv][col]) < 1e-300L) throw std::runtime_error("singular");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const long double d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const long double f = a[r][col];
            if (f == 0.0L) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

/// Information centrality of a raw co-occurrence network.
/// `w` is a symmetric count matrix (diagonal ignored), `s` the article counts.
/// The smoothed weight of every pair is w + alpha; weights are divided by the
/// largest smoothed weight. With `strength_diagonal` the diagonal is 1 plus
/// the row sum of rescaled weights, otherwise 1 plus s / max s.
inline std::vector<double> information_centrality(const std::vector<std::vector<double>>& w,
                                                  const std::vector<double>& s, double alpha,
                                                  bool strength_diagonal = true) {
    const std::size_t n = s.size();
    long double wmax = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) wmax = std::max<long double>(wmax, w[i][j] + alpha);
    const long double smax = n ? *std::max_element(s.begin(), s.end()) : 0.0;

    Matrix b(n, std::vector<long double>(n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
        long double strength = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const long double wh = wmax > 0 ? (w[i][j] + alpha) / wmax : 0.0L;
            b[i][j] = 1.0L - wh;
            strength += wh;
        }
        b[i][i] = 1.0L + (strength_diagonal ? strength : (smax > 0 ? s[i] / smax : 0.0L));
    }
    const Matrix c = invert(b);
    long double trace = 0.0L;
    for (std::size_t i = 0; i < n; ++i) trace += c[i][i];
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double row = 0.0L;
        for (std::size_t j = 0; j < n; ++j) row += c[i][j];
        out[i] = static_cast<double>(static_cast<long double>(n) /
                                     (static_cast<long double>(n) * c[i][i] + trace - 2.0L * row));
    }
    return out;
}

/// Choquet integral of x with respect to the capacity whose Moebius masses
/// are m({p}) = singleton[p] and m({p,q}) = pair[p][q].
inline double choquet(const std::vector<double>& x, const std::vector<double>& singleton,
                      const std::vector<std::vector<double>>& pair) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    auto capacity = [&](const std::vector<bool>& in) {
        long double v = 0.0L;
        for (std::size_t p = 0; p < n; ++p) {
            if (!in[p]) continue;
            v += singleton[p];
            for (std::size_t q = p + 1; q < n; ++q)
                if (in[q]) v += pair[p][q];
        }
        return v;
    };
    std::vector<bool> in(n, true);
    long double total = 0.0L;
    long double prev = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t p = order[k];
        total += (x[p] - prev) * capacity(in);
        prev = x[p];
        in[p] = false;
    }
    return static_cast<double>(total);
}

/// Player weights around focal node k of a dense count matrix: own weight
/// 1 - lambda, the rest split between one-hop neighbours (by edge weight) and
/// two-hop nodes (by path mass) in proportion 1 - mu : mu. Keys are node ids.
struct Players {
    std::map<std::size_t, double> phi;
    std::map<std::pair<std::size_t, std::size_t>, double> interaction;  // node ids, first < second
};

inline Players players(const std::vector<std::vector<double>>& w, std::size_t k, double lambda,
                       double mu, double theta) {
    const std::size_t n = w.size();
    Players out;
    std::vector<std::size_t> direct;
    double wk = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != k && w[k][i] > 0) {
            direct.push_back(i);
            wk += w[k][i];
        }
    }
    out.phi[k] = direct.empty() ? 1.0 : 1.0 - lambda;
    if (direct.empty()) return out;

    auto is_direct = [&](std::size_t j) {
        return std::find(direct.begin(), direct.end(), j) != direct.end();
    };
    std::map<std::size_t, double> rho;
    for (std::size_t i : direct) {
        double denom = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != k && j != i && !is_direct(j) && w[i][j] > 0) denom += w[i][j];
        for (std::size_t j = 0; j < n; ++j)
            if (j != k && j != i && !is_direct(j) && w[i][j] > 0)
                rho[j] += (w[k][i] / wk) * (w[i][j] / denom);
    }
    double rho_sum = 0.0;
    for (const auto& [j, r] : rho) rho_sum += r;
    for (std::size_t i : direct)
        out.phi[i] = (rho.empty() ? lambda : lambda * (1.0 - mu)) * w[k][i] / wk;
    for (const auto& [j, r] : rho) out.phi[j] = lambda * mu * r / rho_sum;

    for (const auto& [p, fp] : out.phi) {
        for (const auto& [q, fq] : out.phi) {
            if (p == k || q == k || q <= p || w[p][q] <= 0) continue;
            out.interaction[{p, q}] = 2.0 * theta * fp * fq;
        }
    }
    return out;
}

}  // namespace oracle
