#pragma once

#include "grassgeo/core.hpp"
#include "grassgeo/pluecker.hpp"
#include "grassgeo/angles.hpp"
#include "grassgeo/geodesics.hpp"
#include "grassgeo/schubert.hpp"
#include "grassgeo/loci.hpp"
#include "grassgeo/sampling.hpp"
#include "grassgeo/verify.hpp"
