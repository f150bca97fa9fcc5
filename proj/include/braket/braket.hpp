/*
 * Copyright (C) 2026 The braket authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BRAKET_BRAKET_HPP
#define BRAKET_BRAKET_HPP

#include "braket/amone.hpp"
#include "braket/csv.hpp"
#include "braket/doubleslit.hpp"
#include "braket/engine.hpp"
#include "braket/epr.hpp"
#include "braket/error.hpp"
#include "braket/harness.hpp"
#include "braket/hilbert.hpp"
#include "braket/io.hpp"
#include "braket/parallel.hpp"
#include "braket/random.hpp"

#endif  // BRAKET_BRAKET_HPP
