//! Compute kernels behind the graph ops. Layout is channel-last
//! (`[N, D, H, W, C]`, W fastest) with `same` zero padding: the output
//! spatial size of a stride-`s` convolution is `ceil(in/s)`, and the
//! extra padding cell goes to the high side.
//!
//! Parallel loops split over output cells or kernel taps so every value
//! is written by exactly one task with a fixed inner reduction order;
//! results do not depend on the thread count.

use rayon::prelude::*;

use crate::{Element, Tensor};

pub fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Low-side padding for a `same` convolution mapping `in` to
/// `ceil(in/s)` with kernel size `k`.
pub fn same_pad_lo(in_dim: usize, k: usize, s: usize) -> usize {
    let out = ceil_div(in_dim, s);
    let total = ((out - 1) * s + k).saturating_sub(in_dim);
    total / 2
}

pub struct ConvDims {
    pub batch: usize,
    pub in_spatial: [usize; 3],
    pub out_spatial: [usize; 3],
    pub c_in: usize,
    pub c_out: usize,
    pub k: [usize; 3],
    pub stride: usize,
    pub pad_lo: [usize; 3],
}

impl ConvDims {
    /// Geometry of `conv3d(x, kernel, stride)`.
    pub fn forward(x_shape: &[usize], k_shape: &[usize], stride: usize) -> ConvDims {
        let in_spatial = [x_shape[1], x_shape[2], x_shape[3]];
        let k = [k_shape[0], k_shape[1], k_shape[2]];
        ConvDims {
            batch: x_shape[0],
            in_spatial,
            out_spatial: [
                ceil_div(in_spatial[0], stride),
                ceil_div(in_spatial[1], stride),
                ceil_div(in_spatial[2], stride),
            ],
            c_in: k_shape[3],
            c_out: k_shape[4],
            k,
            stride,
            pad_lo: [
                same_pad_lo(in_spatial[0], k[0], stride),
                same_pad_lo(in_spatial[1], k[1], stride),
                same_pad_lo(in_spatial[2], k[2], stride),
            ],
        }
    }

    /// Geometry of the conv whose input is `big_spatial` and whose
    /// output is the transpose-conv input; used by both the transposed
    /// convolution and the kernel gradient.
    pub fn for_big(
        batch: usize,
        big_spatial: [usize; 3],
        k_shape: &[usize],
        stride: usize,
    ) -> ConvDims {
        ConvDims {
            batch,
            in_spatial: big_spatial,
            out_spatial: [
                ceil_div(big_spatial[0], stride),
                ceil_div(big_spatial[1], stride),
                ceil_div(big_spatial[2], stride),
            ],
            c_in: k_shape[3],
            c_out: k_shape[4],
            k: [k_shape[0], k_shape[1], k_shape[2]],
            stride,
            pad_lo: [
                same_pad_lo(big_spatial[0], k_shape[0], stride),
                same_pad_lo(big_spatial[1], k_shape[1], stride),
                same_pad_lo(big_spatial[2], k_shape[2], stride),
            ],
        }
    }
}

/// Cross-correlation: `x [N,D,H,W,Ci] * k [kd,kh,kw,Ci,Co] -> [N,out,Co]`.
pub fn conv3d<E: Element>(x: &Tensor<E>, kernel: &Tensor<E>, stride: usize) -> Tensor<E> {
    let d = ConvDims::forward(x.shape(), kernel.shape(), stride);
    let [od, oh, ow] = d.out_spatial;
    let [id, ih, iw] = d.in_spatial;
    let (ci, co) = (d.c_in, d.c_out);
    let xv = x.data();
    let kv = kernel.data();

    let mut out = vec![E::zero(); d.batch * od * oh * ow * co];
    out.par_chunks_mut(oh * ow * co)
        .enumerate()
        .for_each(|(slab, chunk)| {
            let n = slab / od;
            let oz = slab % od;
            for oy in 0..oh {
                for ox in 0..ow {
                    let acc = &mut chunk[(oy * ow + ox) * co..(oy * ow + ox + 1) * co];
                    for kz in 0..d.k[0] {
                        let iz = (oz * stride + kz) as isize - d.pad_lo[0] as isize;
                        if iz < 0 || iz >= id as isize {
                            continue;
                        }
                        for ky in 0..d.k[1] {
                            let iy = (oy * stride + ky) as isize - d.pad_lo[1] as isize;
                            if iy < 0 || iy >= ih as isize {
                                continue;
                            }
                            for kx in 0..d.k[2] {
                                let ix = (ox * stride + kx) as isize - d.pad_lo[2] as isize;
                                if ix < 0 || ix >= iw as isize {
                                    continue;
                                }
                                let xoff = (((n * id + iz as usize) * ih + iy as usize) * iw
                                    + ix as usize)
                                    * ci;
                                let koff = ((kz * d.k[1] + ky) * d.k[2] + kx) * ci * co;
                                for c_in in 0..ci {
                                    let xval = xv[xoff + c_in];
                                    if xval == E::zero() {
                                        continue;
                                    }
                                    let krow = &kv[koff + c_in * co..koff + (c_in + 1) * co];
                                    for (a, &w) in acc.iter_mut().zip(krow) {
                                        *a += xval * w;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        });
    Tensor::new(vec![d.batch, od, oh, ow, co], out)
}

/// Adjoint of [`conv3d`]: maps `x [N,small,Co]` to `[N,out_spatial,Ci]`
/// such that `<conv3d(y,k), x> == <y, conv3d_transpose(x,k)>`.
pub fn conv3d_transpose<E: Element>(
    x: &Tensor<E>,
    kernel: &Tensor<E>,
    stride: usize,
    out_spatial: [usize; 3],
) -> Tensor<E> {
    let d = ConvDims::for_big(x.shape()[0], out_spatial, kernel.shape(), stride);
    debug_assert_eq!(d.out_spatial, [x.shape()[1], x.shape()[2], x.shape()[3]]);
    let [sd, sh, sw] = d.out_spatial; // small (conv output) dims
    let [bd, bh, bw] = out_spatial; // big (conv input) dims
    let (ci, co) = (d.c_in, d.c_out);
    let xv = x.data();
    let kv = kernel.data();

    let mut out = vec![E::zero(); d.batch * bd * bh * bw * ci];
    out.par_chunks_mut(bh * bw * ci)
        .enumerate()
        .for_each(|(slab, chunk)| {
            let n = slab / bd;
            let bz = slab % bd;
            for by in 0..bh {
                for bx in 0..bw {
                    let acc = &mut chunk[(by * bw + bx) * ci..(by * bw + bx + 1) * ci];
                    for kz in 0..d.k[0] {
                        let tz = bz + d.pad_lo[0];
                        if tz < kz || (tz - kz) % stride != 0 {
                            continue;
                        }
                        let sz = (tz - kz) / stride;
                        if sz >= sd {
                            continue;
                        }
                        for ky in 0..d.k[1] {
                            let ty = by + d.pad_lo[1];
                            if ty < ky || (ty - ky) % stride != 0 {
                                continue;
                            }
                            let sy = (ty - ky) / stride;
                            if sy >= sh {
                                continue;
                            }
                            for kx in 0..d.k[2] {
                                let tx = bx + d.pad_lo[2];
                                if tx < kx || (tx - kx) % stride != 0 {
                                    continue;
                                }
                                let sx = (tx - kx) / stride;
                                if sx >= sw {
                                    continue;
                                }
                                let goff = (((n * sd + sz) * sh + sy) * sw + sx) * co;
                                let grow = &xv[goff..goff + co];
                                let koff = ((kz * d.k[1] + ky) * d.k[2] + kx) * ci * co;
                                for (c_in, a) in acc.iter_mut().enumerate() {
                                    let krow = &kv[koff + c_in * co..koff + (c_in + 1) * co];
                                    let mut dot = E::zero();
                                    for (&g, &w) in grow.iter().zip(krow) {
                                        dot += g * w;
                                    }
                                    *a += dot;
                                }
                            }
                        }
                    }
                }
            }
        });
    Tensor::new(vec![d.batch, bd, bh, bw, ci], out)
}

/// Kernel gradient of a conv: `x` is the conv input `[N,big,Ci]`, `g`
/// the output cotangent `[N,small,Co]`; result is kernel-shaped.
pub fn conv3d_kernel_grad<E: Element>(
    x: &Tensor<E>,
    g: &Tensor<E>,
    stride: usize,
    k_spatial: [usize; 3],
) -> Tensor<E> {
    let batch = x.shape()[0];
    let big = [x.shape()[1], x.shape()[2], x.shape()[3]];
    let ci = x.shape()[4];
    let co = g.shape()[4];
    let k_shape = [k_spatial[0], k_spatial[1], k_spatial[2], ci, co];
    let d = ConvDims::for_big(batch, big, &k_shape, stride);
    debug_assert_eq!(d.out_spatial, [g.shape()[1], g.shape()[2], g.shape()[3]]);
    let [sd, sh, sw] = d.out_spatial;
    let [bd, bh, bw] = big;
    let xv = x.data();
    let gv = g.data();

    let taps = k_spatial[0] * k_spatial[1] * k_spatial[2];
    let mut out = vec![E::zero(); taps * ci * co];
    out.par_chunks_mut(ci * co).enumerate().for_each(|(tap, block)| {
        let kz = tap / (k_spatial[1] * k_spatial[2]);
        let ky = (tap / k_spatial[2]) % k_spatial[1];
        let kx = tap % k_spatial[2];
        for n in 0..batch {
            for sz in 0..sd {
                let iz = (sz * stride + kz) as isize - d.pad_lo[0] as isize;
                if iz < 0 || iz >= bd as isize {
                    continue;
                }
                for sy in 0..sh {
                    let iy = (sy * stride + ky) as isize - d.pad_lo[1] as isize;
                    if iy < 0 || iy >= bh as isize {
                        continue;
                    }
                    for sx in 0..sw {
                        let ix = (sx * stride + kx) as isize - d.pad_lo[2] as isize;
                        if ix < 0 || ix >= bw as isize {
                            continue;
                        }
                        let xoff = (((n * bd + iz as usize) * bh + iy as usize) * bw
                            + ix as usize)
                            * ci;
                        let goff = (((n * sd + sz) * sh + sy) * sw + sx) * co;
                        let grow = &gv[goff..goff + co];
                        for c_in in 0..ci {
                            let xval = xv[xoff + c_in];
                            if xval == E::zero() {
                                continue;
                            }
                            let brow = &mut block[c_in * co..(c_in + 1) * co];
                            for (b, &gg) in brow.iter_mut().zip(grow) {
                                *b += xval * gg;
                            }
                        }
                    }
                }
            }
        }
    });
    Tensor::new(k_shape.to_vec(), out)
}

/// 2x2x2 max pooling at stride 2; returns values and the linear input
/// index of each window's maximum (first index wins ties).
pub fn maxpool3d<E: Element>(x: &Tensor<E>) -> (Tensor<E>, Vec<u32>) {
    let s = x.shape();
    let (n, d, h, w, c) = (s[0], s[1], s[2], s[3], s[4]);
    assert!(d % 2 == 0 && h % 2 == 0 && w % 2 == 0, "odd spatial dims");
    let (od, oh, ow) = (d / 2, h / 2, w / 2);
    let xv = x.data();
    let mut out = vec![E::zero(); n * od * oh * ow * c];
    let mut argmax = vec![0u32; out.len()];
    let idx = |n_, z, y, x_, ch| (((n_ * d + z) * h + y) * w + x_) * c + ch;
    for n_ in 0..n {
        for oz in 0..od {
            for oy in 0..oh {
                for ox in 0..ow {
                    for ch in 0..c {
                        let mut best = E::neg_infinity();
                        let mut best_i = 0usize;
                        for dz in 0..2 {
                            for dy in 0..2 {
                                for dx in 0..2 {
                                    let i = idx(n_, oz * 2 + dz, oy * 2 + dy, ox * 2 + dx, ch);
                                    if xv[i] > best {
                                        best = xv[i];
                                        best_i = i;
                                    }
                                }
                            }
                        }
                        let o = (((n_ * od + oz) * oh + oy) * ow + ox) * c + ch;
                        out[o] = best;
                        argmax[o] = best_i as u32;
                    }
                }
            }
        }
    }
    (Tensor::new(vec![n, od, oh, ow, c], out), argmax)
}

/// `a (ta) [m,k] x b (tb) [k,n] -> [m,n]`, with optional transposes.
pub fn matmul<E: Element>(a: &Tensor<E>, b: &Tensor<E>, ta: bool, tb: bool) -> Tensor<E> {
    let (am, ak) = (a.shape()[0], a.shape()[1]);
    let (bm, bk) = (b.shape()[0], b.shape()[1]);
    let (m, k1) = if ta { (ak, am) } else { (am, ak) };
    let (k2, n) = if tb { (bk, bm) } else { (bm, bk) };
    assert_eq!(k1, k2, "matmul inner dims {k1} vs {k2}");
    let av = a.data();
    let bv = b.data();
    let mut out = vec![E::zero(); m * n];
    out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for kk in 0..k1 {
            let aval = if ta { av[kk * ak + i] } else { av[i * ak + kk] };
            if aval == E::zero() {
                continue;
            }
            if tb {
                for (j, r) in row.iter_mut().enumerate() {
                    *r += aval * bv[j * bk + kk];
                }
            } else {
                let brow = &bv[kk * bk..(kk + 1) * bk];
                for (r, &bb) in row.iter_mut().zip(brow) {
                    *r += aval * bb;
                }
            }
        }
    });
    Tensor::new(vec![m, n], out)
}
