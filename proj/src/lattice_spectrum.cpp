/*
   Copyright 2026 The fkpp-qsd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "fkpp/lattice_spectrum.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "fkpp/fkpp_engine.hpp"

namespace fkpp {

namespace {

LatticeEigen top_pair(const Eigen::MatrixXd& sym, const Eigen::VectorXd& unsym, bool largest)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const Eigen::Index idx = largest ? sym.rows() - 1 : 0;
    LatticeEigen r;
    r.kappa = es.eigenvalues()(idx);
    Eigen::VectorXd v = es.eigenvectors().col(idx).cwiseProduct(unsym);
    const Eigen::Index half = v.size() / 2;
    v /= v(half);
    r.profile = v;
    return r;
}

} // namespace

LatticeEigen lattice_dual_spectrum(const ModelParams& params, int L)
{
    params.validate();
    if (L < 2) throw DomainError("lattice spectrum needs L >= 2");
    const double jump = params.alpha * L * L;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(L, L);
    for (int j = 0; j < L; ++j) {
        Q(j, (j + 1) % L) += jump;
        Q(j, (j + L - 1) % L) += jump;
        Q(j, j) -= 2.0 * jump;
    }
    Q(0, 0) -= params.gamma * L;
    LatticeEigen r = top_pair(Q, Eigen::VectorXd::Ones(L), true);
    r.kappa = -r.kappa;
    return r;
}

LatticeEigen stepping_stone_spectrum(const ModelParams& params, int L, int M)
{
    SteppingStone stepper(params, L, M);
    const double m = stepper.migration();
    // Distribution of the change in difference from two independent moves.
    const double p0 = (1 - 2 * m) * (1 - 2 * m) + 2 * m * m;
    const double p1 = 2 * m * (1 - 2 * m);
    const double p2 = m * m;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(L, L);
    for (int j = 0; j < L; ++j) {
        K(j, j) += p0;
        K(j, (j + 1) % L) += p1;
        K(j, (j + L - 1) % L) += p1;
        K(j, (j + 2) % L) += p2;
        K(j, (j + L - 2) % L) += p2;
    }
    // One step maps the two-point function g to D K g; D K is similar to the
    // symmetric D^1/2 K D^1/2.
    Eigen::VectorXd d = Eigen::VectorXd::Ones(L);
    d(0) = 1.0 - 1.0 / M;
    const Eigen::VectorXd sd = d.cwiseSqrt();
    const Eigen::MatrixXd S = sd.asDiagonal() * K * sd.asDiagonal();
    LatticeEigen r = top_pair(S, sd, true);
    r.kappa = -std::log(r.kappa) / stepper.dt();
    return r;
}

} // namespace fkpp
