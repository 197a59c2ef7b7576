// Copyright 2026 the mpea-sim developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPEA_MPEA_HPP
#define MPEA_MPEA_HPP

#include "mpea/bipartite_system.hpp"
#include "mpea/complex_matrix.hpp"
#include "mpea/engine.hpp"
#include "mpea/errors.hpp"
#include "mpea/evolution.hpp"
#include "mpea/general_eig.hpp"
#include "mpea/hermitian_eig.hpp"
#include "mpea/io.hpp"
#include "mpea/readout.hpp"
#include "mpea/scenario.hpp"

#endif  // MPEA_MPEA_HPP
