#pragma once

#include "compositum/errors.hpp"
#include "compositum/cyclo.hpp"
#include "compositum/zmodule.hpp"
#include "compositum/linsolve.hpp"
#include "compositum/series.hpp"
#include "compositum/poly.hpp"
#include "compositum/germ.hpp"
#include "compositum/affine.hpp"
#include "compositum/polyalg.hpp"
#include "compositum/deck.hpp"
#include "compositum/factorized.hpp"
#include "compositum/classify.hpp"
#include "compositum/parser.hpp"
#include "compositum/acceptance.hpp"
#include "compositum/report.hpp"
