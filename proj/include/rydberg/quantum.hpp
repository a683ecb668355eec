#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rydberg {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t max_dimension = 16;

/// Ordered list of unique basis labels ("gg", "rg", ...). Copies share the
/// label storage, so passing a Basis around by value is cheap.
class Basis {
public:
    explicit Basis(std::vector<std::string> labels);

    std::size_t size() const { return labels_->size(); }
    const std::vector<std::string>& labels() const { return *labels_; }
    const std::string& label(std::size_t i) const { return (*labels_)[i]; }

    bool contains(std::string_view label) const;
    /// Throws LookupError for an unknown label.
    std::size_t index(std::string_view label) const;

    friend bool operator==(const Basis& lhs, const Basis& rhs);

private:
    std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Normalized complex amplitude vector over a labeled basis.
class StateVector {
public:
    /// Throws ValidationError if the amplitudes are not normalized to 1e-9
    /// or their count differs from the basis size.
    StateVector(Basis basis, CVector amplitudes);

    /// Normalizes `amplitudes` first. Throws ValidationError for a zero vector.
    static StateVector normalized(Basis basis, CVector amplitudes);
    static StateVector basis_state(Basis basis, std::string_view label);

    const Basis& basis() const { return basis_; }
    const CVector& amplitudes() const { return amplitudes_; }
    Complex amplitude(std::string_view label) const;
    double norm() const { return amplitudes_.norm(); }

private:
    Basis basis_;
    CVector amplitudes_;
};

/// H / hbar in rad/us.
class HermitianOperator {
public:
    /// Throws ValidationError unless `matrix` is square, matches the basis
    /// and equals its conjugate transpose within 1e-12 elementwise.
    HermitianOperator(Basis basis, CMatrix matrix);

    const Basis& basis() const { return basis_; }
    const CMatrix& matrix() const { return matrix_; }

    HermitianOperator operator-() const;

private:
    Basis basis_;
    CMatrix matrix_;
};

/// Spectral decomposition of a Hermitian operator. Evaluating
/// exp(-i H t) for many t reuses the same eigenbasis.
class Propagator {
public:
    explicit Propagator(const HermitianOperator& op);

    const Basis& basis() const { return basis_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

    CMatrix unitary(double duration_us) const;
    StateVector apply(const StateVector& state, double duration_us) const;

private:
    Basis basis_;
    Eigen::VectorXd eigenvalues_;
    CMatrix eigenvectors_;
};

struct Segment {
    HermitianOperator op;
    double duration_us;
};

StateVector propagate_piecewise_constant(const StateVector& state,
                                         const HermitianOperator& op,
                                         double duration_us);

StateVector propagate_schedule(const StateVector& state,
                               std::span<const Segment> schedule);

double population(const StateVector& state, std::string_view label);

/// |<target|state>|^2
double overlap_probability(const StateVector& state, const StateVector& target);

} // namespace rydberg
