/**
 * @file sdd.hpp
 * @brief Umbrella header.
 */
#pragma once

#include "sdd/classify.hpp"
#include "sdd/compensated.hpp"
#include "sdd/error.hpp"
#include "sdd/geom.hpp"
#include "sdd/io.hpp"
#include "sdd/model.hpp"
#include "sdd/oracle.hpp"
#include "sdd/redcert.hpp"
#include "sdd/registry.hpp"
#include "sdd/steps.hpp"
#include "sdd/unicity.hpp"
