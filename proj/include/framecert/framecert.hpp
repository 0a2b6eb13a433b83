#pragma once

// Umbrella header: finite frames, atomic systems for operators, reproducing
// kernels, sampling certificates, and the JSON report layer.

#include "framecert/errors.hpp"
#include "framecert/frames.hpp"
#include "framecert/io.hpp"
#include "framecert/kernels.hpp"
#include "framecert/numeric.hpp"
#include "framecert/operator_atomic.hpp"
#include "framecert/sampling.hpp"
