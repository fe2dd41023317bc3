#pragma once

// Walk lattice bookkeeping. After n steps from the origin the walker can
// occupy sites {-n, -n+2, ..., n} (parity of n); those d = n+1 sites carry
// the engineered qudit. Site k maps to the physical OAM quantum number
// m = k * oam_step (oam_step = 1 in the experiment, so sites and OAM values
// coincide).

#include <stdexcept>
#include <vector>

namespace qwse {

struct Lattice {
    int n_steps = 0;
    int oam_step = 1;

    Lattice() = default;
    explicit Lattice(int n, int oam = 1) : n_steps(n), oam_step(oam) {
        if (n < 0) throw std::invalid_argument("Lattice: n_steps must be >= 0");
        if (oam == 0) throw std::invalid_argument("Lattice: oam_step must be nonzero");
    }

    /// Qudit dimension d = n_steps + 1.
    int dim() const { return n_steps + 1; }

    /// Ordered parity-compatible sites {-n, -n+2, ..., n}.
    std::vector<int> sites() const {
        std::vector<int> out;
        out.reserve(dim());
        for (int k = -n_steps; k <= n_steps; k += 2) out.push_back(k);
        return out;
    }

    /// Index of site k within the ordered parity sites.
    int site_index(int k) const {
        if ((k + n_steps) % 2 != 0 || k < -n_steps || k > n_steps)
            throw std::invalid_argument("Lattice: site off the parity lattice");
        return (k + n_steps) / 2;
    }

    /// Site at ordered index i.
    int site_at(int i) const {
        if (i < 0 || i >= dim()) throw std::invalid_argument("Lattice: index out of range");
        return -n_steps + 2 * i;
    }

    /// OAM quantum number carried by site k.
    int oam_of_site(int k) const { return k * oam_step; }

    bool operator==(const Lattice& o) const {
        return n_steps == o.n_steps && oam_step == o.oam_step;
    }
};

}  // namespace qwse
