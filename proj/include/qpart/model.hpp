#pragma once

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "qpart/forcing.hpp"

namespace qpart {

enum class CoordinateTopology { line, circle };

/// Separable Hamiltonian H(q, p, t) = T(p) + V(q, t) for symplectic stepping.
/// All the time dependence lives in the potential.
class SplitHamiltonian {
public:
    virtual ~SplitHamiltonian() = default;

    virtual int dof() const = 0;
    virtual double kinetic(std::span<const double> p) const = 0;
    /// dq/dt = dT/dp
    virtual void kinetic_gradient(std::span<const double> p, std::span<double> out) const = 0;
    virtual double potential(std::span<const double> q, double t) const = 0;
    /// out[i] = dV/dq_i
    virtual void potential_gradient(std::span<const double> q, double t,
                                    std::span<double> out) const = 0;
    /// dV/dt, used for the conjugate-momentum kick of the time coordinate.
    virtual double potential_time_derivative(std::span<const double> q, double t) const = 0;

    double value(std::span<const double> q, std::span<const double> p, double t) const {
        return kinetic(p) + potential(q, t);
    }
};

/// A dynamical system on M x T^N in augmented form: the state vector is
/// (m_0..m_{dim_m-1}, theta_0..theta_{N-1}) and the vector field is autonomous.
class SystemModel {
public:
    virtual ~SystemModel() = default;

    virtual std::string_view name() const = 0;
    virtual int dim_m() const = 0;
    virtual const QuasiperiodicForcing& forcing() const = 0;
    virtual CoordinateTopology topology(int m_coordinate) const = 0;

    /// Augmented state dimension dim_m + N.
    int dim() const { return dim_m() + forcing().count(); }

    virtual void rhs(std::span<const double> x, std::span<double> dx) const = 0;

    /// Hamiltonian structure, or nullptr when the model has none. The split
    /// potential takes the m-part as (q, p) with q unwrapped.
    virtual const SplitHamiltonian* hamiltonian() const { return nullptr; }

    virtual bool has_exact_solution() const { return false; }
    virtual std::vector<double> exact_solution(std::span<const double> ic, double t) const;

    virtual bool has_exact_average() const { return false; }
    virtual double exact_average(std::span<const double> ic) const;

    /// Copy of this model with the forcing's initial phases replaced — the
    /// slice-at-theta_0 mechanism used by grid sweeps. Throws unless overridden.
    virtual std::unique_ptr<SystemModel> with_phases(std::span<const double> phases) const;

    /// Hook for models that can precompute drive terms at the exact times an
    /// integrator will request. No-op by default; purely a cache, results are
    /// bitwise identical with or without it.
    virtual void precompute_time_samples(std::span<const double> times) const;
};

} // namespace qpart
