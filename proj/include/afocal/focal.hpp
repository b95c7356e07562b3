#pragma once

#include "afocal/focal/polynomial.hpp"
#include "afocal/focal/frame_data.hpp"
#include "afocal/focal/fixtures.hpp"
