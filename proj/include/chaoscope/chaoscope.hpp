#pragma once

#include "chaoscope/errors.hpp"
#include "chaoscope/sphere.hpp"
#include "chaoscope/poly.hpp"
#include "chaoscope/rational_map.hpp"
#include "chaoscope/julia.hpp"
#include "chaoscope/rng.hpp"
#include "chaoscope/protocol.hpp"
#include "chaoscope/lattes.hpp"
#include "chaoscope/render.hpp"
#include "chaoscope/ensemble.hpp"
