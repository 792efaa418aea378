#ifndef MZLAB_MZLAB_HPP_
#define MZLAB_MZLAB_HPP_

// Umbrella header: the whole laboratory.
//
//   qubit.hpp          dim-2/4 complex states and maps
//   measurement.hpp    indirect apparatus, Kraus family, ε/η, weak values
//   interferometer.hpp two-path interferometer with spin probe and feedback
//   uncertainty.hpp    closed-form error-disturbance budget and bounds
//   rng.hpp            deterministic splitmix64 / Poisson / normal quantile
//   experiment.hpp     counting simulation, fits, calibration, reconstruction

#include "mzlab/core.hpp"
#include "mzlab/experiment.hpp"
#include "mzlab/interferometer.hpp"
#include "mzlab/measurement.hpp"
#include "mzlab/qubit.hpp"
#include "mzlab/rng.hpp"
#include "mzlab/uncertainty.hpp"

#endif  // MZLAB_MZLAB_HPP_
