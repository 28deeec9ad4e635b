#pragma once

#include "shfam/arrays.hpp"
#include "shfam/error.hpp"
#include "shfam/hashfam.hpp"
#include "shfam/integer.hpp"
#include "shfam/sequences.hpp"
#include "shfam/serialize.hpp"
#include "shfam/solfree.hpp"
