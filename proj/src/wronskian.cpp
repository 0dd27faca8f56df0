#include "idring/wronskian.hpp"

namespace idr {

namespace {

RingElem det_rec(const Ring& ring, const ElemMatrix& m, std::vector<std::size_t>& cols, std::size_t row) {
    if (row == m.size()) return ring.one();
    RingElem s = ring.zero();
    int sign = 1;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::size_t c = cols[k];
        if (!m[row][c].is_zero()) {
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
            RingElem t = m[row][c] * det_rec(ring, m, cols, row + 1);
            cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), c);
            if (sign > 0) s += t;
            else s -= t;
        }
        sign = -sign;
    }
    return s;
}

}  // namespace

RingElem determinant(const Ring& ring, const ElemMatrix& m) {
    if (!ring.commutative()) throw RingError("commutative-required");
    for (const auto& row : m)
        if (row.size() != m.size()) throw RingError("determinant of a non-square matrix");
    std::vector<std::size_t> cols(m.size());
    for (std::size_t k = 0; k < cols.size(); ++k) cols[k] = k;
    return det_rec(ring, m, cols, 0);
}

RingElem wronskian(const Ring& ring, const std::vector<RingElem>& fs) {
    if (!ring.commutative()) throw RingError("commutative-required");
    ElemMatrix m(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) {
        RingElem f = fs[j];
        for (std::size_t i = 0; i < fs.size(); ++i) {
            m[i].push_back(f);
            f = ring.derive(f);
        }
    }
    return determinant(ring, m);
}

}  // namespace idr
