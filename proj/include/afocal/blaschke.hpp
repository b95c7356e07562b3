#pragma once

#include "afocal/blaschke/apparatus.hpp"
#include "afocal/blaschke/fixtures.hpp"
