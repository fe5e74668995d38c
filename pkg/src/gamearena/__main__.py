from gamearena.cli import main

raise SystemExit(main())
