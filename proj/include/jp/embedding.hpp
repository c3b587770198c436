#pragma once

#include <string>

#include "jp/number_field.hpp"

namespace jp {

// A choice of conjugate root of the field's minimal polynomial plus working
// precision. root_index 0 is the distinguished real embedding.
struct Embedding {
    FieldPtr field;
    int root_index = 0;
    int precision_bits = 64;
    int precision_cap = 4096;

    bool is_identity() const { return root_index == 0; }

    // Real embeddings produce boxes with exact zero imaginary part.
    bool is_real() const {
        if (root_index == 0 || field->degree() < 3) return true;
        return field->real_root_count() == 3;
    }
};

inline Embedding make_embedding(const FieldPtr& f, int root_index, int precision_bits = 64,
                                int precision_cap = 4096) {
    if (root_index < 0 || root_index >= f->degree())
        throw error(errc::index_out_of_range, "embedding root index exceeds field degree");
    if (precision_bits < 8 || precision_cap < precision_bits)
        throw error(errc::parse_error, "bad embedding precision configuration");
    return Embedding{f, root_index, precision_bits, precision_cap};
}

// sigma(x) as a certified box. Guarantees width(result) <=
// 2^(8-precision_bits) * scale, with scale = max(1, sum |coords|).
inline Box embed(const FieldElement& x, const Embedding& e) {
    if (!x.field()->same(*e.field) && !(x.is_rational() && x.field()->degree() == 1))
        throw error(errc::field_mismatch, "element does not live in the embedding's field");
    if (x.is_rational()) return Box(x.coords()[0]);

    Rat scale(1);
    for (const Rat& c : x.coords()) scale += rat_abs(c);
    Rat target = pow2_rat(8 - e.precision_bits) * scale;

    for (int bits = std::max(32, e.precision_bits); bits <= e.precision_cap; bits *= 2) {
        Box th = e.field->root_box(e.root_index, bits);
        Box r(x.coords()[2]);
        r = r * th + x.coords()[1];
        r = r * th + x.coords()[0];
        if (r.width() <= target) return r;
    }
    throw error(errc::precision_exhausted,
                "embedding of element cannot meet its error bound at the precision cap");
}

// The root box itself, refined until |minpoly(box)| <= 2^(1-precision_bits).
inline Box embedded_root(const Embedding& e) {
    Poly p;
    for (const Int& c : e.field->minpoly()) p.push_back(Rat(c, 1));
    Rat target = pow2_rat(1 - e.precision_bits);
    for (int bits = std::max(32, e.precision_bits); bits <= e.precision_cap; bits *= 2) {
        Box th = e.field->root_box(e.root_index, bits);
        Box v(Rat(0));
        for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * th + *it;
        if (abs_upper(v, bits) <= target) return th;
    }
    throw error(errc::precision_exhausted, "root box cannot certify the residual bound");
}

} // namespace jp
