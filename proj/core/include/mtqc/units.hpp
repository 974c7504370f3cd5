#pragma once

#include <cmath>
#include <compare>
#include <type_traits>

namespace mtqc {

/// Dimension exponents over (mass, length, time, current, temperature).
template <int M, int L, int T, int I, int K>
struct Dim {
    static constexpr int mass = M;
    static constexpr int length = L;
    static constexpr int time = T;
    static constexpr int current = I;
    static constexpr int temperature = K;
};

template <class A, class B>
using DimProduct = Dim<A::mass + B::mass, A::length + B::length, A::time + B::time,
                       A::current + B::current, A::temperature + B::temperature>;
template <class A, class B>
using DimQuotient = Dim<A::mass - B::mass, A::length - B::length, A::time - B::time,
                        A::current - B::current, A::temperature - B::temperature>;

/// SI value tagged with its dimension. Arithmetic only type-checks when the
/// dimensions agree, so a power density cannot be added to a temperature.
template <class D>
class Quantity {
public:
    using dim = D;

    constexpr Quantity() = default;
    constexpr explicit Quantity(double si) : v_(si) {}

    [[nodiscard]] constexpr double si() const { return v_; }

    constexpr Quantity& operator+=(Quantity o) { v_ += o.v_; return *this; }
    constexpr Quantity& operator-=(Quantity o) { v_ -= o.v_; return *this; }
    constexpr Quantity& operator*=(double s) { v_ *= s; return *this; }

    friend constexpr Quantity operator+(Quantity a, Quantity b) { return Quantity(a.v_ + b.v_); }
    friend constexpr Quantity operator-(Quantity a, Quantity b) { return Quantity(a.v_ - b.v_); }
    friend constexpr Quantity operator-(Quantity a) { return Quantity(-a.v_); }
    friend constexpr Quantity operator*(Quantity a, double s) { return Quantity(a.v_ * s); }
    friend constexpr Quantity operator*(double s, Quantity a) { return Quantity(a.v_ * s); }
    friend constexpr Quantity operator/(Quantity a, double s) { return Quantity(a.v_ / s); }
    friend constexpr double operator/(Quantity a, Quantity b) { return a.v_ / b.v_; }
    friend constexpr auto operator<=>(Quantity a, Quantity b) = default;

private:
    double v_ = 0.0;
};

template <class A, class B>
constexpr Quantity<DimProduct<A, B>> operator*(Quantity<A> a, Quantity<B> b) {
    return Quantity<DimProduct<A, B>>(a.si() * b.si());
}

template <class A, class B>
    requires(!std::is_same_v<A, B>)
constexpr Quantity<DimQuotient<A, B>> operator/(Quantity<A> a, Quantity<B> b) {
    return Quantity<DimQuotient<A, B>>(a.si() / b.si());
}

using Dimensionless = Dim<0, 0, 0, 0, 0>;
using Length = Quantity<Dim<0, 1, 0, 0, 0>>;
using Area = Quantity<Dim<0, 2, 0, 0, 0>>;
using Duration = Quantity<Dim<0, 0, 1, 0, 0>>;
using Current = Quantity<Dim<0, 0, 0, 1, 0>>;
using Temperature = Quantity<Dim<0, 0, 0, 0, 1>>;
using Power = Quantity<Dim<1, 2, -3, 0, 0>>;
using PowerFlux = Quantity<Dim<1, 0, -3, 0, 0>>;
using Resistance = Quantity<Dim<1, 2, -3, -2, 0>>;
using Resistivity = Quantity<Dim<1, 3, -3, -2, 0>>;
using ThermalConductivity = Quantity<Dim<1, 1, -3, 0, -1>>;
using HeatTransferCoefficient = Quantity<Dim<1, 0, -3, 0, -1>>;
using ThermalResistance = Quantity<Dim<-1, -2, 3, 0, 1>>;

namespace literals {
constexpr Length operator""_m(long double v) { return Length(static_cast<double>(v)); }
constexpr Length operator""_mm(long double v) { return Length(static_cast<double>(v) * 1e-3); }
constexpr Length operator""_um(long double v) { return Length(static_cast<double>(v) * 1e-6); }
constexpr Length operator""_nm(long double v) { return Length(static_cast<double>(v) * 1e-9); }
constexpr Duration operator""_us(long double v) { return Duration(static_cast<double>(v) * 1e-6); }
constexpr Duration operator""_s(long double v) { return Duration(static_cast<double>(v)); }
constexpr Current operator""_A(long double v) { return Current(static_cast<double>(v)); }
constexpr Temperature operator""_K(long double v) { return Temperature(static_cast<double>(v)); }
constexpr Power operator""_W(long double v) { return Power(static_cast<double>(v)); }
}  // namespace literals

inline constexpr Length millimetres(double v) { return Length(v * 1e-3); }
inline constexpr Length micrometres(double v) { return Length(v * 1e-6); }
inline constexpr Duration microseconds(double v) { return Duration(v * 1e-6); }

}  // namespace mtqc
