#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freeconv/measures.hpp"
#include "freeconv/subordination.hpp"

namespace freeconv {

// Counter-based generator: every draw is a pure function of (seed, index), so
// parallel sampling is reproducible and a fixed seed yields bit-identical
// streams regardless of evaluation order.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
    double uniform01(std::uint64_t index) const;                    // in (0,1)
    std::pair<double, double> gauss_pair(std::uint64_t index) const;  // standard normals

  private:
    std::uint64_t seed_;
};

// Dense column-major complex matrix, just big enough for the sampler.
struct CMatrix {
    int n = 0;
    std::vector<cplx> a;

    explicit CMatrix(int dim = 0) : n(dim), a(std::size_t(dim) * dim) {}
    cplx& at(int i, int j) { return a[std::size_t(j) * n + i]; }
    const cplx& at(int i, int j) const { return a[std::size_t(j) * n + i]; }
    static CMatrix identity(int dim);
};

// Haar-distributed unitary: complex Ginibre matrix, Householder QR, R-diagonal
// phases folded back into Q.
CMatrix haar_unitary(int n, std::uint64_t seed);

double unitarity_defect(const CMatrix& u);  // ||U* U - I||_F

// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations (the matrix is
// consumed). Ascending order.
std::vector<double> hermitian_eigenvalues(CMatrix a);

struct SpectrumSample {
    int matrix_size = 0;
    std::uint64_t seed = 0;
    std::vector<double> eigenvalues;  // sorted ascending
    std::string model_descriptor;
    bool representation_warning = false;  // atom masses not representable within 1%
};

// Spectrum of B U* A U B with A = diag of mu atoms (counts proportional to
// masses), B = diag of square roots of nu atom positions.
SpectrumSample sample_spectrum(const Measure& mu_atoms, const Measure& nu_atoms, int n,
                               std::uint64_t seed);

// Kolmogorov-Smirnov distance between the empirical spectrum and a predicted
// law (atoms + density); the prediction must carry total mass 1 within 1e-2.
double ks_distance(const SpectrumSample& sample, const ConvolutionMeasure& predicted);

// Largest-remainder apportionment of n slots to the atom masses.
std::vector<int> atom_counts(const std::vector<std::pair<double, double>>& atoms, int n);

}  // namespace freeconv
