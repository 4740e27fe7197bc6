#pragma once

// Reference values produced by tests/oracles/generate_oracles.py (mpmath,
// 40 digits). Regenerate with `python3 tests/oracles/generate_oracles.py`.

namespace qineq::oracle_values {

// Quantization fixed point, coupling 1, a = 1, L = 100, n = 5.
inline constexpr double kFixedPointOmegaOdd = 0.31573465040242370892;
inline constexpr double kFixedPointOmegaEven = 0.3141065796681742954;

// Odd branch at omega*a/2 = pi/2, coupling 1.
inline constexpr double kPhaseOddHalfPi = -0.56691150494100940508;
inline constexpr double kAmplitudeSqOddHalfPi = 0.71159956085799905757;

// Region-I components, a = 1.
inline constexpr double kEta1Coupling1 = -0.095538172239702739111;
inline constexpr double kEta2Coupling1 = 0.054508204317352840816;
inline constexpr double kEta1Coupling1e6 = -0.26179886420173317158;
inline constexpr double kEta2Coupling1e6 = 0.13089943210101006967;
inline constexpr double kEtaSumCoupling05 = -0.022306939637396287353;
inline constexpr double kEtaSumCoupling5 = -0.093348335185337349976;
inline constexpr double kEtaSumCoupling10 = -0.10908286080325587788;

// Odd mode n = 30 (coupling 1, a = 1, L = 100) evaluated at omega + 1e-4.
inline constexpr double kShiftedContinuityResidual = 2.5908498782943344966e-5;
inline constexpr double kShiftedJumpResidual = 4.2366044249785655617e-6;

// Region-II coefficient, coupling 1, a = 1 (equal to 1/pi).
inline constexpr double kBetaCoupling1 = 0.31830988618377992103;

// Critical Lorentzian width for eta = pi/24, a = 1.
inline constexpr double kCriticalTauClosedForm = 0.43008305806976319094;
inline constexpr double kCriticalTauQuadrature = 0.27247790453790563168;

}  // namespace qineq::oracle_values
