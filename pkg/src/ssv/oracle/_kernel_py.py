"""Pure-python twin of the compiled enumeration kernel.

Semantics must match ``_kernel.pyx`` exactly; the benchmark in
``benchmarks/bench_oracle.py`` compares the two.
"""

from __future__ import annotations

from .compiler import (
    OP_ADD,
    OP_AND,
    OP_DISTINCT,
    OP_EQ,
    OP_GE,
    OP_GT,
    OP_IMPLIES,
    OP_ITE,
    OP_LE,
    OP_LOAD,
    OP_LOADF,
    OP_LT,
    OP_NE,
    OP_NOT,
    OP_OR,
    OP_PUSH,
    OP_SUB,
    OP_SUM,
    OP_XOR,
)

MODE_EXISTS = 0
MODE_COUNT = 1
MODE_EVAL = 2

COMPILED = False


def _eval(code, start, end, cells, stack):
    sp = 0
    pc = start
    while pc < end:
        op = code[pc]
        pc += 1
        if op == OP_PUSH:
            stack[sp] = code[pc]
            pc += 1
            sp += 1
        elif op == OP_LOAD:
            stack[sp] = cells[code[pc]]
            pc += 1
            sp += 1
        elif op == OP_LOADF:
            nargs = code[pc]
            base = code[pc + 1]
            pc += 2
            index = stack[sp - nargs]
            for i in range(1, nargs):
                index = index * code[pc] + stack[sp - nargs + i]
                pc += 1
            sp -= nargs
            stack[sp] = cells[base + index]
            sp += 1
        elif op == OP_EQ:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] == stack[sp] else 0
        elif op == OP_NE:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] != stack[sp] else 0
        elif op == OP_LT:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] < stack[sp] else 0
        elif op == OP_LE:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] <= stack[sp] else 0
        elif op == OP_GT:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] > stack[sp] else 0
        elif op == OP_GE:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] >= stack[sp] else 0
        elif op == OP_ADD:
            sp -= 1
            stack[sp - 1] += stack[sp]
        elif op == OP_SUB:
            sp -= 1
            stack[sp - 1] -= stack[sp]
        elif op == OP_NOT:
            stack[sp - 1] = 0 if stack[sp - 1] != 0 else 1
        elif op == OP_AND:
            n = code[pc]
            pc += 1
            value = 1
            for i in range(sp - n, sp):
                if stack[i] == 0:
                    value = 0
                    break
            sp -= n
            stack[sp] = value
            sp += 1
        elif op == OP_OR:
            n = code[pc]
            pc += 1
            value = 0
            for i in range(sp - n, sp):
                if stack[i] != 0:
                    value = 1
                    break
            sp -= n
            stack[sp] = value
            sp += 1
        elif op == OP_SUM:
            n = code[pc]
            pc += 1
            total = 0
            for i in range(sp - n, sp):
                total += stack[i]
            sp -= n
            stack[sp] = total
            sp += 1
        elif op == OP_DISTINCT:
            n = code[pc]
            pc += 1
            value = 1
            for i in range(sp - n, sp):
                for j in range(i + 1, sp):
                    if stack[i] == stack[j]:
                        value = 0
                        break
                if value == 0:
                    break
            sp -= n
            stack[sp] = value
            sp += 1
        elif op == OP_IMPLIES:
            sp -= 1
            stack[sp - 1] = 1 if stack[sp - 1] == 0 or stack[sp] != 0 else 0
        elif op == OP_XOR:
            sp -= 1
            stack[sp - 1] = 1 if (stack[sp - 1] != 0) != (stack[sp] != 0) else 0
        elif op == OP_ITE:
            sp -= 2
            stack[sp - 1] = stack[sp] if stack[sp - 1] != 0 else stack[sp + 1]
        else:  # pragma: no cover - compiler emits a closed opcode set
            raise ValueError(f"bad opcode {op}")
    return stack[0]


def run(code, starts, domains, cells, mode, max_stack):
    """Enumerate assignments (or evaluate once in MODE_EVAL).

    Cell 0 varies fastest; EXISTS returns 1 on the first satisfying state,
    COUNT returns the number of satisfying states.
    """
    ncells = len(domains)
    nexprs = len(starts) - 1
    stack = [0] * max(max_stack, 1)
    if mode == MODE_EVAL:
        value = 0
        for i in range(nexprs):
            value = _eval(code, starts[i], starts[i + 1], cells, stack)
        return value
    count = 0
    while True:
        ok = True
        for i in range(nexprs):
            if _eval(code, starts[i], starts[i + 1], cells, stack) == 0:
                ok = False
                break
        if ok:
            if mode == MODE_EXISTS:
                return 1
            count += 1
        k = 0
        while k < ncells:
            cells[k] += 1
            if cells[k] < domains[k]:
                break
            cells[k] = 0
            k += 1
        if k == ncells:
            break
    return count if mode == MODE_COUNT else 0
