#include "pbvp/quadrature.hpp"

#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace pbvp {

double integrate_piece(const double* g, const double* gp, int m, double dx) {
    if (m < 0) throw std::invalid_argument("integrate_piece: negative cell count");
    if (m == 0) return 0.0;
    double acc = 0.0;
    int even = m % 2 == 0 ? m : m - 1;
    if (even >= 2) {
        double odd_sum = 0.0, even_sum = 0.0;
        for (int i = 1; i < even; i += 2) odd_sum += g[i];
        for (int i = 2; i < even; i += 2) even_sum += g[i];
        acc += dx / 3.0 * (g[0] + g[even] + 4.0 * odd_sum + 2.0 * even_sum);
    }
    if (m != even)
        acc += 0.5 * dx * (g[m - 1] + g[m]) - dx * dx / 12.0 * (gp[m] - gp[m - 1]);
    return acc;
}

int worker_threads() {
    const char* env = std::getenv("PBVP_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    if (v < 1) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? v : std::min<int>(v, static_cast<int>(hw));
}

std::vector<double> kernel_apply(const std::vector<double>& G, const std::vector<double>& Gp,
                                 const std::vector<double>& w, const std::vector<double>& wp,
                                 int n) {
    if (static_cast<int>(G.size()) != n + 1 || static_cast<int>(Gp.size()) != n + 1 ||
        static_cast<int>(w.size()) != n + 1 || static_cast<int>(wp.size()) != n + 1)
        throw std::invalid_argument("kernel_apply: array lengths must be n+1");
    const double dx = 1.0 / n;
    std::vector<double> out(n + 1);

    auto row = [&](int k, std::vector<double>& g, std::vector<double>& gp) {
        // piece 1: s in [0, t_k], kernel argument t_k - s = (k-j)/n
        for (int j = 0; j <= k; ++j) {
            g[j] = G[k - j] * w[j];
            gp[j] = -Gp[k - j] * w[j] + G[k - j] * wp[j];
        }
        double acc = integrate_piece(g.data(), gp.data(), k, dx);
        // piece 2: s in [t_k, 1], kernel argument 1 + t_k - s = (n+k-j)/n
        for (int j = k; j <= n; ++j) {
            g[j - k] = G[n + k - j] * w[j];
            gp[j - k] = -Gp[n + k - j] * w[j] + G[n + k - j] * wp[j];
        }
        return acc + integrate_piece(g.data(), gp.data(), n - k, dx);
    };

    int nthreads = worker_threads();
    if (nthreads <= 1) {
        std::vector<double> g(n + 1), gp(n + 1);
        for (int k = 0; k < n; ++k) out[k] = row(k, g, gp);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                std::vector<double> g(n + 1), gp(n + 1);
                for (int k = t; k < n; k += nthreads) out[k] = row(k, g, gp);
            });
        for (auto& th : pool) th.join();
    }
    out[n] = out[0];  // k=0 and k=n sum the same cells
    return out;
}

}  // namespace pbvp
