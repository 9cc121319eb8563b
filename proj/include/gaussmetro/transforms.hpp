// Copyright 2026 The gaussmetro Authors
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

#ifndef GAUSSMETRO_TRANSFORMS_HPP
#define GAUSSMETRO_TRANSFORMS_HPP

#include <cstdint>
#include <random>

#include "gaussmetro/linalg.hpp"

namespace gaussmetro {

/// Phase-shift generator. The monochromatic kind rotates mode 1 by phi; the
/// polychromatic kind rotates mode 1 by (1+eps) phi and mode 2 by (1-eps) phi.
struct PhaseGenerator {
    enum class Kind { Monochromatic, Polychromatic };
    Kind kind = Kind::Monochromatic;
    double eps = 0.0;

    static PhaseGenerator mono() { return {}; }
    static PhaseGenerator poly(double eps);
    bool is_mono() const { return kind == Kind::Monochromatic; }
};

/// Orthogonal symplectic 2N x 2N matrix with a probe/ancilla split.
/// Moments transform as <R> -> L <R>, V -> L V L^T.
struct PassiveTransform {
    Mat L;
    int probe_modes = 0;

    int modes() const { return static_cast<int>(L.rows() / 2); }
    Mat ls() const { return L.topLeftCorner(2 * probe_modes, 2 * probe_modes); }
    Mat lsa() const { return L.topRightCorner(2 * probe_modes, 2 * (modes() - probe_modes)); }
    Mat las() const { return L.bottomLeftCorner(2 * (modes() - probe_modes), 2 * probe_modes); }
    Mat la() const {
        const int a = 2 * (modes() - probe_modes);
        return L.bottomRightCorner(a, a);
    }
};

constexpr double kPassiveTol = 1e-11;

/// Wraps and validates (orthogonal and symplectic within 1e-11).
PassiveTransform make_passive(const Mat& L, int probe_modes);
PassiveTransform with_probe_modes(const PassiveTransform& t, int probe_modes);
PassiveTransform identity_transform(int modes);

/// U_N(phi) for the generator: U(phi) on mode 1 (or the two weighted
/// rotations on modes 1 and 2), identity elsewhere.
Mat phase_rotation(double phi, const PhaseGenerator& gen, int modes);
Mat phase_rotation_derivative(double phi, const PhaseGenerator& gen, int modes);

/// Projector P_phi with d/dphi U_N = P_phi J_N: U(phi) (+) 0 for the
/// monochromatic generator, (1+eps)U((1+eps)phi) (+) (1-eps)U((1-eps)phi) (+) 0
/// for the polychromatic one.
Mat phase_projector(double phi, const PhaseGenerator& gen, int modes);

/// Uniform multimode interferometer: first position row is 1/sqrt(N).
PassiveTransform qumi(int modes);
/// Same interferometer built as B_{12}(1/N) B_{23}(1/(N-1)) ... B_{N-1,N}(1/2).
PassiveTransform qumi_sequential(int modes);

/// Beam splitter with transmissivity tau on modes (i, j), 0-based:
/// [[sqrt(tau) I, sqrt(1-tau) I], [-sqrt(1-tau) I, sqrt(tau) I]].
PassiveTransform beam_splitter(double tau, int i, int j, int modes);

/// Haar-random passive transform (from a complex unitary a -> U a).
PassiveTransform random_passive(int modes, std::mt19937_64& rng);
/// Haar-random real orthogonal mixing (beam splitters without phase
/// shifters). Leaves a homogeneously squeezed array unchanged.
PassiveTransform random_real_passive(int modes, std::mt19937_64& rng);

/// S(phi) = U_N(phi) L.
Mat full_propagation(const PassiveTransform& t, double phi, const PhaseGenerator& gen);
/// d/dphi S(phi) = dU_N(phi) L.
Mat propagation_derivative(const PassiveTransform& t, double phi, const PhaseGenerator& gen);

/// Embeds a passive m-mode unitary expressed as a real 2m x 2m matrix.
Mat unitary_to_phase_space(const Eigen::MatrixXcd& u);

}  // namespace gaussmetro

#endif
