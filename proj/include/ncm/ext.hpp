#pragma once

// Ext groups via the bar resolution, and Hochschild cohomology via the
// standard cochain complex.
//
// For right modules M, N the degree-k cochains are Lin(M (x) A^{(x)k}, N)
// with differential
//   (delta f)(m,a1,...,a{k+1}) = f(m a1, a2, ..., a{k+1})
//     + sum_{i=1..k} (-1)^i f(m, a1, ..., a_i a_{i+1}, ..., a{k+1})
//     + (-1)^{k+1} f(m, a1, ..., ak) a_{k+1};
// its cohomology at k is Ext^k_A(M, N) (the underlying resolution of M is by
// free right modules, one F-basis worth of A per bar degree).
//
// Hochschild cochains of a bimodule W are Lin(A^{(x)i}, W) with the usual
// differential (left action on the first slot, right action on the last).
//
// Coordinates flatten a map V -> W as row-major (v * dimW + w); all matrices
// act on row vectors.  delta^2 = 0 is verified when the complex is built.

#include <cstddef>
#include <vector>

#include "ncm/algebra.hpp"
#include "ncm/complex.hpp"
#include "ncm/errors.hpp"
#include "ncm/field.hpp"
#include "ncm/la.hpp"
#include "ncm/module.hpp"

namespace ncm {

// Split a tensor index over `nslots` factors of size `da` (first slot most
// significant) and a leading block of size `lead`.
inline std::pair<std::size_t, std::vector<std::size_t>> split_tensor_index(
    std::size_t w, std::size_t da, std::size_t nslots) {
  std::vector<std::size_t> j(nslots);
  for (std::size_t s = nslots; s-- > 0;) {
    j[s] = w % da;
    w /= da;
  }
  return {w, std::move(j)};
}

inline std::size_t join_tensor_index(std::size_t lead,
                                     const std::vector<std::size_t>& j,
                                     std::size_t da) {
  std::size_t w = lead;
  for (std::size_t s : j) w = w * da + s;
  return w;
}

// Faces 0..k of the bar complex of the right module m, as matrices
// M (x) A^{(x)(k+1)} -> M (x) A^{(x)k}.  Face 0 feeds a1 into the module;
// face i (1 <= i <= k) multiplies slots i and i+1.  The final face (which
// acts on the target module instead) is handled by the callers.
template <ScalarField F>
std::vector<Mat<F>> bar_faces(const RightModule<F>& m, std::size_t k) {
  const FinAlgebra<F>& a = *m.alg;
  const F& fld = a.field();
  std::size_t da = a.dim(), dm = m.dim;
  std::size_t big = dm, small = dm;
  for (std::size_t s = 0; s <= k; ++s) big *= da;
  for (std::size_t s = 0; s < k; ++s) small *= da;
  std::vector<Mat<F>> faces;
  for (std::size_t i = 0; i <= k; ++i) faces.emplace_back(fld, big, small);
  for (std::size_t w = 0; w < big; ++w) {
    auto [mi, j] = split_tensor_index(w, da, k + 1);
    // face 0: module index absorbs slot 0
    {
      const Mat<F>& act = m.act[j[0]];
      std::vector<std::size_t> rest(j.begin() + 1, j.end());
      for (std::size_t c = 0; c < dm; ++c) {
        if (fld.is_zero(act.at(mi, c))) continue;
        faces[0].at(w, join_tensor_index(c, rest, da)) = act.at(mi, c);
      }
    }
    // face i: multiply slots i-1 and i (0-based) of the bar part
    for (std::size_t i = 1; i <= k; ++i) {
      std::vector<std::size_t> rest = j;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      for (const auto& [c, coeff] : a.basis_mul(j[i - 1], j[i])) {
        rest[i - 1] = c;
        std::size_t v = join_tensor_index(mi, rest, da);
        faces[i].at(w, v) = faces[i].at(w, v) + coeff;
      }
    }
  }
  return faces;
}

// The bar cochain complex computing Ext^k_A(M, N) for k <= kmax.
template <ScalarField F>
VecCochain<F> bar_ext_cochain(const RightModule<F>& m, const RightModule<F>& n,
                              int kmax) {
  require(m.alg.get() == n.alg.get(), ErrorCode::BadDimension,
          "modules over different algebras");
  require(kmax >= 0, ErrorCode::BadDimension, "negative degree");
  const FinAlgebra<F>& a = *m.alg;
  const F& fld = a.field();
  std::size_t da = a.dim(), dm = m.dim, dn = n.dim;

  std::vector<std::size_t> vdims;  // dim of M (x) A^{(x)k}
  {
    std::size_t v = dm;
    for (int k = 0; k <= kmax + 1; ++k) {
      vdims.push_back(v);
      v *= da;
    }
  }
  std::vector<std::size_t> dims;
  for (int k = 0; k <= kmax + 1; ++k) dims.push_back(vdims[k] * dn);

  std::vector<Mat<F>> d;
  const typename F::Elem minus_one = fld.from_int(-1);
  for (int k = 0; k <= kmax; ++k) {
    Mat<F> dk(fld, dims[k], dims[k + 1]);
    std::vector<Mat<F>> faces = bar_faces(m, static_cast<std::size_t>(k));
    for (std::size_t w = 0; w < vdims[k + 1]; ++w) {
      // precomposition faces 0..k
      for (std::size_t i = 0; i <= static_cast<std::size_t>(k); ++i) {
        bool neg = (i % 2 != 0);
        for (std::size_t v = 0; v < vdims[k]; ++v) {
          const auto& coeff = faces[i].at(w, v);
          if (fld.is_zero(coeff)) continue;
          auto signed_coeff = neg ? minus_one * coeff : coeff;
          for (std::size_t nn = 0; nn < dn; ++nn)
            dk.at(v * dn + nn, w * dn + nn) =
                dk.at(v * dn + nn, w * dn + nn) + signed_coeff;
        }
      }
      // final face: evaluate away the last slot, then act on N
      std::size_t vlead = w / da, jlast = w % da;
      bool neg = (k % 2 == 0);  // sign (-1)^{k+1}
      const Mat<F>& actn = n.act[jlast];
      for (std::size_t nn = 0; nn < dn; ++nn)
        for (std::size_t nn2 = 0; nn2 < dn; ++nn2) {
          const auto& coeff = actn.at(nn, nn2);
          if (fld.is_zero(coeff)) continue;
          auto signed_coeff = neg ? minus_one * coeff : coeff;
          dk.at(vlead * dn + nn, w * dn + nn2) =
              dk.at(vlead * dn + nn, w * dn + nn2) + signed_coeff;
        }
    }
    d.push_back(std::move(dk));
  }
  return make_vec_cochain(fld, 0, std::move(dims), std::move(d));
}

template <ScalarField F>
std::size_t ext_dim(const RightModule<F>& m, const RightModule<F>& n, int k) {
  return cohomology_dim(bar_ext_cochain(m, n, k), k);
}

// A cohomology group presented inside its cochain complex: the dimension and
// a cocycle basis in degree `degree` (coordinates of the complex).
template <ScalarField F>
struct CohomologyGroup {
  VecCochain<F> cochain;
  int degree = 0;
  std::size_t dim = 0;
  std::vector<Vec<F>> cocycles;
};

template <ScalarField F>
CohomologyGroup<F> ext_right(const RightModule<F>& m, const RightModule<F>& n,
                             int i) {
  auto cx = bar_ext_cochain(m, n, i);
  std::size_t d = cohomology_dim(cx, i);
  auto z = cocycle_basis(cx, i);
  return {std::move(cx), i, d, std::move(z)};
}

// ---------------------------------------------------------------------------
// Hochschild cochains of a bimodule.

template <ScalarField F>
VecCochain<F> hochschild_cochain(const BimoduleSpace<F>& w, int imax) {
  require(w.left_alg.get() == w.right_alg.get(), ErrorCode::BadDimension,
          "Hochschild cochains need a bimodule over a single algebra");
  require(imax >= 0, ErrorCode::BadDimension, "negative degree");
  const FinAlgebra<F>& a = *w.left_alg;
  const F& fld = a.field();
  std::size_t da = a.dim(), dw = w.dim;

  std::vector<std::size_t> vdims;  // dim of A^{(x)i}
  {
    std::size_t v = 1;
    for (int i = 0; i <= imax + 1; ++i) {
      vdims.push_back(v);
      v *= da;
    }
  }
  std::vector<std::size_t> dims;
  for (int i = 0; i <= imax + 1; ++i) dims.push_back(vdims[i] * dw);

  std::vector<Mat<F>> d;
  const typename F::Elem minus_one = fld.from_int(-1);
  for (int i = 0; i <= imax; ++i) {
    Mat<F> di(fld, dims[i], dims[i + 1]);
    for (std::size_t ww = 0; ww < vdims[i + 1]; ++ww) {
      auto [lead, j] = split_tensor_index(ww, da, i + 1);
      (void)lead;  // always 0: there is no leading module factor here
      // first face: left action of slot 0 on the value
      {
        std::vector<std::size_t> rest(j.begin() + 1, j.end());
        std::size_t v = join_tensor_index(0, rest, da);
        const Mat<F>& lact = w.left_act[j[0]];
        for (std::size_t mm = 0; mm < dw; ++mm)
          for (std::size_t mm2 = 0; mm2 < dw; ++mm2) {
            const auto& coeff = lact.at(mm, mm2);
            if (fld.is_zero(coeff)) continue;
            di.at(v * dw + mm, ww * dw + mm2) =
                di.at(v * dw + mm, ww * dw + mm2) + coeff;
          }
      }
      // middle faces: multiply slots s-1 and s, sign (-1)^s
      for (std::size_t s = 1; s <= static_cast<std::size_t>(i); ++s) {
        bool neg = (s % 2 != 0);
        std::vector<std::size_t> rest = j;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(s));
        for (const auto& [c, coeff] : a.basis_mul(j[s - 1], j[s])) {
          rest[s - 1] = c;
          std::size_t v = join_tensor_index(0, rest, da);
          auto signed_coeff = neg ? minus_one * coeff : coeff;
          for (std::size_t mm = 0; mm < dw; ++mm)
            di.at(v * dw + mm, ww * dw + mm) =
                di.at(v * dw + mm, ww * dw + mm) + signed_coeff;
        }
      }
      // last face: right action of the final slot, sign (-1)^{i+1}
      {
        bool neg = (i % 2 == 0);
        std::vector<std::size_t> rest(j.begin(), j.end() - 1);
        std::size_t v = join_tensor_index(0, rest, da);
        const Mat<F>& ract = w.right_act[j.back()];
        for (std::size_t mm = 0; mm < dw; ++mm)
          for (std::size_t mm2 = 0; mm2 < dw; ++mm2) {
            const auto& coeff = ract.at(mm, mm2);
            if (fld.is_zero(coeff)) continue;
            auto signed_coeff = neg ? minus_one * coeff : coeff;
            di.at(v * dw + mm, ww * dw + mm2) =
                di.at(v * dw + mm, ww * dw + mm2) + signed_coeff;
          }
      }
    }
    d.push_back(std::move(di));
  }
  return make_vec_cochain(fld, 0, std::move(dims), std::move(d));
}

template <ScalarField F>
std::size_t hochschild_dim(const BimoduleSpace<F>& w, int i) {
  return cohomology_dim(hochschild_cochain(w, i), i);
}

template <ScalarField F>
std::size_t hochschild_dim(const AlgebraPtr<F>& a, int i) {
  return hochschild_dim(regular_bimodule_space(a), i);
}

template <ScalarField F>
CohomologyGroup<F> hochschild_cohomology(const BimoduleSpace<F>& w, int i) {
  auto cx = hochschild_cochain(w, i);
  std::size_t d = cohomology_dim(cx, i);
  auto z = cocycle_basis(cx, i);
  return {std::move(cx), i, d, std::move(z)};
}

}  // namespace ncm
