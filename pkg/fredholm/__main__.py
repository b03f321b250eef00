from fredholm.main import main

raise SystemExit(main())
