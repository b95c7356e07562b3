#pragma once

#include "afocal/blaschke.hpp"
#include "afocal/umbilic/construct.hpp"
