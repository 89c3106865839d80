// Copyright 2026 The quatcomp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "quatcomp/image.hpp"
#include "quatcomp/qmatrix.hpp"

namespace quatcomp {

/// 10 log10(255^2 / MSE), MSE over all 3 * M * N channel samples.
/// Identical images give +infinity.
double psnr(const RgbImage& x, const RgbImage& y);

/// Both matrices are decoded (clamped and rounded) first.
double psnr(const QMatrix& x, const QMatrix& y);

/// Mean local SSIM per channel, averaged over R, G and B. Gaussian window
/// 11 x 11 with sigma 1.5, K1 = 0.01, K2 = 0.03, L = 255, evaluated only where
/// the window fits inside the image. Needs at least 11 x 11 pixels.
double ssim(const RgbImage& x, const RgbImage& y);
double ssim(const QMatrix& x, const QMatrix& y);

/// PSNR on raw quaternion entries, all four planes, with the peak taken as
/// the largest component magnitude of `truth`. For synthetic problems.
double matrix_psnr(const QMatrix& truth, const QMatrix& estimate);

/// ||estimate - truth||_F / ||truth||_F.
double relative_error(const QMatrix& truth, const QMatrix& estimate);

}  // namespace quatcomp
