#include "rydberg/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rydberg/error.hpp"

namespace rydberg {

namespace {

constexpr double norm_tolerance = 1e-9;
constexpr double hermitian_tolerance = 1e-12;

void require_same_basis(const Basis& lhs, const Basis& rhs, const char* what) {
    if (!(lhs == rhs)) {
        throw BasisMismatchError(std::string(what) + ": operands live on different bases");
    }
}

void require_duration(double duration_us) {
    if (!(duration_us >= 0.0) || !std::isfinite(duration_us)) {
        throw ValidationError("propagation duration must be finite and >= 0");
    }
}

} // namespace

Basis::Basis(std::vector<std::string> labels) {
    if (labels.empty() || labels.size() > max_dimension) {
        throw ValidationError("basis size must be in [1, " + std::to_string(max_dimension) + "]");
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw ValidationError("duplicate basis label '" + l + "'");
        }
    }
    labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

bool Basis::contains(std::string_view label) const {
    return std::find(labels_->begin(), labels_->end(), label) != labels_->end();
}

std::size_t Basis::index(std::string_view label) const {
    auto it = std::find(labels_->begin(), labels_->end(), label);
    if (it == labels_->end()) {
        throw LookupError("unknown basis label '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - labels_->begin());
}

bool operator==(const Basis& lhs, const Basis& rhs) {
    return lhs.labels_ == rhs.labels_ || *lhs.labels_ == *rhs.labels_;
}

StateVector::StateVector(Basis basis, CVector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_.size()) {
        throw ValidationError("amplitude count does not match basis size");
    }
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > norm_tolerance) {
        throw ValidationError("state vector is not normalized");
    }
}

StateVector StateVector::normalized(Basis basis, CVector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ValidationError("cannot normalize a zero or non-finite vector");
    }
    return StateVector(std::move(basis), amplitudes / n);
}

StateVector StateVector::basis_state(Basis basis, std::string_view label) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
    v(static_cast<Eigen::Index>(basis.index(label))) = 1.0;
    return StateVector(std::move(basis), std::move(v));
}

Complex StateVector::amplitude(std::string_view label) const {
    return amplitudes_(static_cast<Eigen::Index>(basis_.index(label)));
}

HermitianOperator::HermitianOperator(Basis basis, CMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    const auto n = static_cast<Eigen::Index>(basis_.size());
    if (matrix_.rows() != n || matrix_.cols() != n) {
        throw BasisMismatchError("operator dimension does not match basis size");
    }
    const double deviation = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (!(deviation <= hermitian_tolerance)) {
        throw ValidationError("operator is not Hermitian");
    }
}

HermitianOperator HermitianOperator::operator-() const {
    return HermitianOperator(basis_, -matrix_);
}

Propagator::Propagator(const HermitianOperator& op) : basis_(op.basis()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(op.matrix());
    if (solver.info() != Eigen::Success) {
        throw ValidationError("eigendecomposition failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
}

CMatrix Propagator::unitary(double duration_us) const {
    require_duration(duration_us);
    CVector phases(eigenvalues_.size());
    for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) {
        phases(i) = std::polar(1.0, -eigenvalues_(i) * duration_us);
    }
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

StateVector Propagator::apply(const StateVector& state, double duration_us) const {
    require_same_basis(state.basis(), basis_, "propagate");
    require_duration(duration_us);
    if (duration_us == 0.0) {
        return state;
    }
    CVector c = eigenvectors_.adjoint() * state.amplitudes();
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        c(i) *= std::polar(1.0, -eigenvalues_(i) * duration_us);
    }
    return StateVector(basis_, eigenvectors_ * c);
}

StateVector propagate_piecewise_constant(const StateVector& state,
                                         const HermitianOperator& op,
                                         double duration_us) {
    require_same_basis(state.basis(), op.basis(), "propagate");
    require_duration(duration_us);
    if (duration_us == 0.0) {
        return state;
    }
    return Propagator(op).apply(state, duration_us);
}

StateVector propagate_schedule(const StateVector& state, std::span<const Segment> schedule) {
    for (const auto& seg : schedule) {
        require_same_basis(state.basis(), seg.op.basis(), "propagate_schedule");
        require_duration(seg.duration_us);
    }
    StateVector current = state;
    for (const auto& seg : schedule) {
        current = propagate_piecewise_constant(current, seg.op, seg.duration_us);
    }
    return current;
}

double population(const StateVector& state, std::string_view label) {
    return std::norm(state.amplitude(label));
}

double overlap_probability(const StateVector& state, const StateVector& target) {
    require_same_basis(state.basis(), target.basis(), "overlap");
    return std::norm(target.amplitudes().dot(state.amplitudes()));
}

} // namespace rydberg
