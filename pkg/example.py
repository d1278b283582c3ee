#!/usr/bin/env python3

import asyncio
import os

from dotenv import load_dotenv

from src.private_product import ProtocolConfig, async_run_protocol, build_family, check_def3

load_dotenv()

p = int(os.environ.get('P', '5'))
seed = int(os.environ.get('PRIVATE_PRODUCT_SEED', '0'))


async def main():
    config = ProtocolConfig(p)

    for a in range(p):
        for b in range(p):
            transcript = await async_run_protocol(a, b, config, seed)
            print(a, b, transcript.sent_label, transcript.product)

    report = check_def3(build_family(p))
    print(report.passed, report.class_constants)


if __name__ == "__main__":
    asyncio.run(main())
