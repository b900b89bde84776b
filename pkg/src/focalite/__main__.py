from focalite.cli import main

raise SystemExit(main())
